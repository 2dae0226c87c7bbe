#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fedq/weyl.hpp"
#include "support/random_inputs.hpp"

using namespace fedq;

namespace {

const ChartSpec t2{ChartMode::torus, 1};

ChartFunction cs(int k1, int k2) { return ChartFunction::trig(t2, false, {k1, k2}); }
ChartFunction sn(int k1, int k2) { return ChartFunction::trig(t2, true, {k1, k2}); }
ChartFunction one() { return ChartFunction(t2, Scalar(Rat(1))); }

WeylContextPtr ctx7() { return WeylContext::make(t2, 7, 2); }

WeylElement y(const WeylContextPtr &ctx, int i, int p = 1)
{
	std::array<int, kMaxDim> e{};
	e[static_cast<size_t>(i)] = p;
	return WeylElement::y_monomial(ctx, e, one());
}

WeylElement random_element(const WeylContextPtr &ctx, testing::RandomChart &gen, int form_degree = -1)
{
	WeylElement a(ctx);
	int terms = 2 + gen.pick(3);
	for (int t = 0; t < terms; ++t) {
		std::array<int, kMaxDim> e{};
		e[0] = gen.pick(3);
		e[1] = gen.pick(2);
		int k = gen.pick(2);
		std::uint8_t mask = 0;
		int q = form_degree >= 0 ? form_degree : gen.pick(3);
		if (q == 1)
			mask = static_cast<std::uint8_t>(1u << gen.pick(2));
		else if (q == 2)
			mask = 3;
		a.add_term(WeylKey::make(k, e, mask, 2), gen.function(2, 1));
	}
	return a;
}

WeylElement omega_y_dx(const WeylContextPtr &ctx)
{
	// omega_{ij} y^i dx^j
	WeylElement s(ctx);
	for (int i = 0; i < 2; ++i)
		for (int j = 0; j < 2; ++j) {
			int w = omega_entry(t2, i, j);
			if (w == 0)
				continue;
			std::array<int, kMaxDim> e{};
			e[static_cast<size_t>(i)] = 1;
			s.add_term(WeylKey::make(0, e, static_cast<std::uint8_t>(1u << j), 2), one().scaled(Rat(w)));
		}
	return s;
}

} // namespace

TEST_CASE("circ product basics")
{
	auto ctx = ctx7();
	testing::RandomChart gen(t2, 31);
	WeylElement a = random_element(ctx, gen);
	CHECK(circ(a, WeylElement::unit(ctx)) == a);
	CHECK(circ(WeylElement::unit(ctx), a) == a);

	// y1 o y2 = y1 y2 + (nu/2) Lambda^{12}
	WeylElement y1y2(ctx);
	y1y2.add_term(WeylKey::make(0, {1, 1}, 0, 2), one());
	y1y2.add_term(WeylKey::make(1, {}, 0, 2), one().scaled(rat(lambda_entry(t2, 0, 1), 2)));
	CHECK(circ(y(ctx, 0), y(ctx, 1)) == y1y2);

	// brute-force associativity: (y1 o y1) o y2 = y1 o (y1 o y2)
	CHECK(circ(circ(y(ctx, 0), y(ctx, 0)), y(ctx, 1)) == circ(y(ctx, 0), circ(y(ctx, 0), y(ctx, 1))));

	// associativity on random triples, exact up to truncation degree
	for (int i = 0; i < 8; ++i) {
		WeylElement u = random_element(ctx, gen);
		WeylElement v = random_element(ctx, gen);
		WeylElement w = random_element(ctx, gen);
		CHECK(circ(circ(u, v), w) == circ(u, circ(v, w)));
	}
}

TEST_CASE("filtration is respected under refinement")
{
	auto ka = WeylContext::make(t2, 7, 2);
	auto kb = WeylContext::make(t2, 9, 2);
	testing::RandomChart gen(t2, 32);
	WeylElement a7 = random_element(ka, gen), b7 = random_element(ka, gen);
	// replay the same terms into the refined context
	WeylElement a9(kb), b9(kb);
	for (const auto &t : a7.terms())
		a9.add_term(t.first, t.second);
	for (const auto &t : b7.terms())
		b9.add_term(t.first, t.second);
	WeylElement p7 = circ(a7, b7), p9 = circ(a9, b9);
	for (const auto &t : p9.terms()) {
		if (t.first.total_degree(2) > 7)
			continue;
		auto it = p7.terms().find(t.first);
		REQUIRE(it != p7.terms().end());
		CHECK(it->second == t.second);
	}
	for (const auto &t : p7.terms())
		CHECK(p9.terms().count(t.first) == 1);
}

TEST_CASE("graded commutator")
{
	auto ctx = ctx7();
	testing::RandomChart gen(t2, 33);

	// [a, a] = 0 for even-degree a
	WeylElement a0 = random_element(ctx, gen, 0);
	WeylElement a2 = random_element(ctx, gen, 2);
	CHECK(commutator(a0, a0).is_zero());
	CHECK(commutator(a2, a2).is_zero());

	// [y1, y2] = nu Lambda^{12}
	WeylElement expect(ctx);
	expect.add_term(WeylKey::make(1, {}, 0, 2), one().scaled(Rat(lambda_entry(t2, 0, 1))));
	CHECK(commutator(y(ctx, 0), y(ctx, 1)) == expect);

	// [omega_{ij} y^i dx^j, a] = -nu delta(a) on random a
	WeylElement s = omega_y_dx(ctx);
	for (int i = 0; i < 6; ++i) {
		WeylElement a = random_element(ctx, gen);
		CHECK(commutator(s, a) == -delta(a).nu_shifted(1));
	}

	// central elements: functions of x and nu, and 2-forms with scalar
	// coefficients, commute with everything
	WeylElement f = WeylElement::from_function(ctx, cs(1, 0), 1);
	WeylElement w2 = WeylElement::from_form(ctx, standard_symplectic_form(t2), 1);
	for (int i = 0; i < 4; ++i) {
		WeylElement a = random_element(ctx, gen);
		CHECK(commutator(f, a).is_zero());
		CHECK(commutator(w2, a).is_zero());
	}

	// graded Jacobi on pure degrees
	WeylElement u = random_element(ctx, gen, 1);
	WeylElement v = random_element(ctx, gen, 0);
	WeylElement w = random_element(ctx, gen, 1);
	// (-1)^{q_u q_w}[u,[v,w]] + (-1)^{q_v q_u}[v,[w,u]] + (-1)^{q_w q_v}[w,[u,v]] = 0
	WeylElement jac = commutator(u, commutator(v, w)).scaled(Rat(-1)) +
	                  commutator(v, commutator(w, u)) + commutator(w, commutator(u, v));
	CHECK(jac.is_zero());
}

TEST_CASE("delta and its partial inverse")
{
	auto ctx = ctx7();
	// delta(y1 y2) = y2 dx1 + y1 dx2
	WeylElement y1y2(ctx);
	y1y2.add_term(WeylKey::make(0, {1, 1}, 0, 2), one());
	WeylElement expect(ctx);
	expect.add_term(WeylKey::make(0, {0, 1}, 1, 2), one());
	expect.add_term(WeylKey::make(0, {1, 0}, 2, 2), one());
	CHECK(delta(y1y2) == expect);

	// delta of a pure function vanishes
	CHECK(delta(WeylElement::from_function(ctx, cs(1, 1))).is_zero());

	// delta_inv(dx1) = y1 ; delta_inv(y1 dx2) = 1/2 y1 y2
	WeylElement dx1(ctx);
	dx1.add_term(WeylKey::make(0, {}, 1, 2), one());
	CHECK(delta_inv(dx1) == y(ctx, 0));
	WeylElement y1dx2(ctx);
	y1dx2.add_term(WeylKey::make(0, {1, 0}, 2, 2), one());
	WeylElement half(ctx);
	half.add_term(WeylKey::make(0, {1, 1}, 0, 2), one().scaled(rat(1, 2)));
	CHECK(delta_inv(y1dx2) == half);

	// delta^2 = 0, (delta_inv)^2 = 0, and the Hodge identity
	// a = a_{00} + delta delta_inv a + delta_inv delta a on random elements
	testing::RandomChart gen(t2, 34);
	for (int i = 0; i < 50; ++i) {
		WeylElement a = random_element(ctx, gen);
		CHECK(delta(delta(a)).is_zero());
		CHECK(delta_inv(delta_inv(a)).is_zero());
		WeylElement a00(ctx);
		for (const auto &t : a.terms())
			if (t.first.ytotal(2) == 0 && t.first.mask() == 0)
				a00.add_term(t.first, t.second);
		CHECK(delta(delta_inv(a)) + delta_inv(delta(a)) + a00 == a);
	}
}

TEST_CASE("connection lift and covariant derivation")
{
	auto ctx = ctx7();
	Connection flat = Connection::flat(t2);
	ConnectionLift lf = lift_connection(ctx, flat);
	CHECK(lf.gamma_bar.is_zero());
	CHECK(lf.r_bar.is_zero());
	CHECK(covariant_deriv(lf, y(ctx, 0)).is_zero()); // d(y1) = 0, constant coefficient
	WeylElement fx = WeylElement::from_function(ctx, cs(1, 0));
	CHECK(covariant_deriv(lf, fx) == d_x(fx));

	// non-symplectic connections are rejected
	std::vector<ChartFunction> bad(8, ChartFunction(t2));
	bad[0] = cs(1, 0);
	CHECK_THROWS_AS(lift_connection(ctx, Connection::from_christoffels(t2, bad)), Error);

	// curved symplectic connection: the derivation squares to (1/nu)[r_bar, .]
	SymTensor3 s(t2);
	s.set(0, 0, 0, cs(1, 0).scaled(rat(1, 4)));
	s.set(1, 1, 1, sn(0, 1).scaled(rat(1, 2)));
	Connection curved = Connection::with_potential(flat, s);
	ConnectionLift lc = lift_connection(ctx, curved);
	testing::RandomChart gen(t2, 35);
	for (int i = 0; i < 6; ++i) {
		WeylElement a = random_element(ctx, gen);
		WeylElement dd = covariant_deriv(lc, covariant_deriv(lc, a));
		CHECK(dd == commutator_over_nu(lc.r_bar, a));
	}

	// gamma_bar is y-quadratic with totally symmetric coefficients: delta_inv
	// applied twice to it vanishes (sanity on the lift's shape)
	CHECK(lc.gamma_bar.min_total_degree() == 2);

	// Leibniz: the derivation respects circ with the form-degree sign
	for (int i = 0; i < 4; ++i) {
		WeylElement a = random_element(ctx, gen, 1);
		WeylElement b = random_element(ctx, gen, gen.pick(2));
		WeylElement lhs = covariant_deriv(lc, circ(a, b));
		WeylElement rhs = circ(covariant_deriv(lc, a), b) - circ(a, covariant_deriv(lc, b));
		CHECK(lhs == rhs);
	}
	for (int i = 0; i < 4; ++i) {
		WeylElement a = random_element(ctx, gen, 0);
		WeylElement b = random_element(ctx, gen, gen.pick(3));
		WeylElement lhs = covariant_deriv(lc, circ(a, b));
		WeylElement rhs = circ(covariant_deriv(lc, a), b) + circ(a, covariant_deriv(lc, b));
		CHECK(lhs == rhs);
	}
}

TEST_CASE("sigma projection")
{
	auto ctx = ctx7();
	// sigma kills y-terms, keeps the nu-series of the scalar part
	WeylElement a = WeylElement::from_function(ctx, cs(0, 1), 2) + y(ctx, 0).scaled(sn(1, 0));
	NuSeries<ChartFunction> s = sigma(a);
	CHECK(s.coeff(2) == cs(0, 1));
	CHECK(s.coeff(0).is_zero());

	// sigma(y1 o y2) = (nu/2) Lambda^{12}
	NuSeries<ChartFunction> p = sigma(circ(y(ctx, 0), y(ctx, 1)));
	CHECK(p.coeff(1) == one().scaled(rat(lambda_entry(t2, 0, 1), 2)));

	// circ_scalar_part agrees with sigma of the full product
	testing::RandomChart gen(t2, 36);
	for (int i = 0; i < 6; ++i) {
		WeylElement u = random_element(ctx, gen, 0);
		WeylElement v = random_element(ctx, gen, 0);
		CHECK(circ_scalar_part(u, v, 7) == sigma(circ(u, v)));
	}
}

TEST_CASE("W+ degree rule")
{
	auto ctx = ctx7();
	// nu^{-1} y^3 has total degree 1: allowed in W+
	WeylElement v(ctx, true);
	v.add_term(WeylKey::make(-1, {3, 0}, 0, 2), one());
	CHECK_FALSE(v.is_zero());
	CHECK(v.min_total_degree() == 1);

	// negative total degree is rejected even in W+
	WeylElement bad(ctx, true);
	CHECK_THROWS_AS(bad.add_term(WeylKey::make(-1, {1, 0}, 0, 2), one()), Error);

	// outside W+, negative nu powers are rejected outright
	WeylElement plain(ctx);
	CHECK_THROWS_AS(plain.add_term(WeylKey::make(-1, {3, 0}, 0, 2), one()), Error);
}

TEST_CASE("tensorial pullback of Weyl sections")
{
	auto ctx = ctx7();
	const JetRing *ring = JetRing::make({{"eps", 2}});
	Scalar eps = Scalar::generator(ring, 0);
	DiffeoFamily sh = DiffeoFamily::from_displacement(t2, {ChartFunction(t2), cs(1, 0).scaled(eps)});

	// pullback respects the pointwise algebra and the identity map
	testing::RandomChart gen(t2, 37);
	WeylElement a = random_element(ctx, gen);
	CHECK(pullback_weyl(a, DiffeoFamily::identity(t2)) == a);
	WeylElement b = random_element(ctx, gen);
	CHECK(pullback_weyl(mul_pointwise(a, b), sh) == mul_pointwise(pullback_weyl(a, sh), pullback_weyl(b, sh)));

	// d_x commutes with pullback on scalars (chain rule check)
	WeylElement f = WeylElement::from_function(ctx, sn(0, 1));
	CHECK(pullback_weyl(d_x(f), sh) == d_x(pullback_weyl(f, sh)));
}
