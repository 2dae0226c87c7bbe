#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fedq/fedosov.hpp"
#include "support/moyal_oracle.hpp"
#include "support/random_inputs.hpp"

using namespace fedq;

namespace {

const ChartSpec t2{ChartMode::torus, 1};

ChartFunction cs(int k1, int k2) { return ChartFunction::trig(t2, false, {k1, k2}); }
ChartFunction sn(int k1, int k2) { return ChartFunction::trig(t2, true, {k1, k2}); }
ChartFunction one() { return ChartFunction(t2, Scalar(Rat(1))); }

DifferentialForm default_chi()
{
	return DifferentialForm::monomial(one() + cs(0, 1).scaled(rat(1, 2)), {0, 1});
}

Connection curved_connection()
{
	SymTensor3 s(t2);
	s.set(0, 0, 0, cs(1, 0).scaled(rat(1, 4)));
	return Connection::with_potential(Connection::flat(t2), s);
}

// Flat-setup closed form of Q: the Taylor lift sum_a (1/a!) y^a d^a F.
WeylElement taylor_lift(const WeylContextPtr &ctx, const ChartFunction &f)
{
	WeylElement out(ctx);
	const int cap = ctx->trunc_degree();
	for (int a1 = 0; a1 <= cap; ++a1)
		for (int a2 = 0; a1 + a2 <= cap; ++a2) {
			ChartFunction d = f;
			Rat fact = 1;
			for (int i = 0; i < a1; ++i) {
				d = d.derivative(0);
				fact *= i + 1;
			}
			for (int i = 0; i < a2; ++i) {
				d = d.derivative(1);
				fact *= i + 1;
			}
			out += WeylElement::y_monomial(ctx, {a1, a2}, d.scaled(1 / fact));
		}
	return out;
}

WeylElement random_section(const WeylContextPtr &ctx, testing::RandomChart &gen)
{
	WeylElement a(ctx);
	for (int t = 0; t < 3; ++t) {
		std::array<int, kMaxDim> e{};
		e[0] = gen.pick(3);
		e[1] = gen.pick(2);
		std::uint8_t mask = static_cast<std::uint8_t>(gen.pick(4));
		if (mask == 3 && gen.pick(2) == 0)
			mask = 0;
		a.add_term(WeylKey::make(gen.pick(2), e, mask, 2), gen.function(2, 1));
	}
	return a;
}

} // namespace

TEST_CASE("solve_r leading terms")
{
	auto ctx = WeylContext::make(t2, 7, 2);

	// flat connection, Omega = 0: r = 0 is the fixed point
	FedosovSetup flat0 = FedosovSetup::build(ctx, Connection::flat(t2), NuSeries<DifferentialForm>(kExactOrder, 1));
	CHECK(flat0.r().is_zero());

	// flat connection, Omega = nu chi: leading term is -delta_inv(nu chi)
	DifferentialForm chi = default_chi();
	FedosovSetup flatchi = FedosovSetup::build(ctx, Connection::flat(t2), chi);
	WeylElement expect3 = -delta_inv(WeylElement::from_form(ctx, chi, 1));
	WeylElement r3(ctx);
	for (const auto &t : flatchi.r().terms())
		if (t.first.total_degree(2) == 3)
			r3.add_term(t.first, t.second);
	CHECK(r3 == expect3);

	// curved connection, Omega = 0: leading term is delta_inv(R_bar)
	FedosovSetup curved =
	    FedosovSetup::build(ctx, curved_connection(), NuSeries<DifferentialForm>(kExactOrder, 1));
	WeylElement c3(ctx);
	for (const auto &t : curved.r().terms())
		if (t.first.total_degree(2) == 3)
			c3.add_term(t.first, t.second);
	CHECK(c3 == delta_inv(curved.lift().r_bar));

	// invariants hold on a setup with both curvature and central form
	FedosovSetup both = FedosovSetup::build(ctx, curved_connection(), chi);
	CHECK(delta_inv(both.r()).is_zero());
	CHECK(both.r().min_total_degree() >= 3);
	CHECK(is_zero_through(both.fedosov_residual(), 6));

	// a non-closed central form is rejected
	DifferentialForm open_form = DifferentialForm::monomial(sn(1, 1), {0, 1});
	CHECK(!exterior_d(open_form).is_zero() == false); // top degree: closed anyway
	// use a non-symplectic connection to exercise the other precondition
	std::vector<ChartFunction> bad(8, ChartFunction(t2));
	bad[0] = cs(1, 0);
	CHECK_THROWS_AS(FedosovSetup::build(ctx, Connection::from_christoffels(t2, bad), chi), Error);
}

TEST_CASE("flat connection D is the Koszul differential")
{
	auto ctx = WeylContext::make(t2, 7, 2);
	FedosovSetup flat0 = FedosovSetup::build(ctx, Connection::flat(t2), NuSeries<DifferentialForm>(kExactOrder, 1));

	CHECK(flat0.apply_D(WeylElement::unit(ctx)).is_zero());

	// D(y1) = -dx1
	std::array<int, kMaxDim> e{};
	e[0] = 1;
	WeylElement y1 = WeylElement::y_monomial(ctx, e, one());
	WeylElement dx1(ctx);
	dx1.add_term(WeylKey::make(0, {}, 1, 2), one());
	CHECK(flat0.apply_D(y1) == -dx1);
}

TEST_CASE("D squares to zero on the solved setup")
{
	auto ctx = WeylContext::make(t2, 7, 2);
	FedosovSetup setup = FedosovSetup::build(ctx, curved_connection(), default_chi());
	testing::RandomChart gen(t2, 41);
	for (int i = 0; i < 10; ++i) {
		// two applications of D spend two degrees of delta validity
		WeylElement a = random_section(ctx, gen);
		CHECK(is_zero_through(setup.apply_D(setup.apply_D(a)), 5));
	}
}

TEST_CASE("Q is the inverse of sigma onto flat sections")
{
	auto ctx = WeylContext::make(t2, 7, 2);
	FedosovSetup setup = FedosovSetup::build(ctx, curved_connection(), default_chi());

	CHECK(setup.quantize(one()) == WeylElement::unit(ctx));

	testing::RandomChart gen(t2, 42);
	for (int i = 0; i < 6; ++i) {
		ChartFunction f = gen.function();
		WeylElement qf = setup.quantize(f);
		// sigma o Q = id exactly
		NuSeries<ChartFunction> back = sigma(qf);
		CHECK(back.coeff(0) == f);
		CHECK(back == NuSeries<ChartFunction>::constant(f, back.cap()));
		// D(QF) = 0 up to truncation (one delta of validity)
		CHECK(is_zero_through(setup.apply_D(qf), 6));
	}

	// flat setup: Q is the Taylor lift, checked termwise
	FedosovSetup flat0 = FedosovSetup::build(ctx, Connection::flat(t2), NuSeries<DifferentialForm>(kExactOrder, 1));
	for (int i = 0; i < 4; ++i) {
		ChartFunction f = gen.function(2, 1);
		CHECK(flat0.quantize(f) == taylor_lift(ctx, f));
	}
}

TEST_CASE("star product against the Moyal oracle")
{
	auto ctx = WeylContext::make(t2, 9, 3);
	FedosovSetup flat0 = FedosovSetup::build(ctx, Connection::flat(t2), NuSeries<DifferentialForm>(kExactOrder, 1));

	testing::RandomChart gen(t2, 43);
	ChartFunction f0 = gen.function();
	CHECK(flat0.star(f0, one()) == NuSeries<ChartFunction>::constant(f0, 3));
	CHECK(flat0.star(one(), f0) == NuSeries<ChartFunction>::constant(f0, 3));

	// flat Fedosov equals the direct Moyal product through nu^3, 20 pairs
	for (int i = 0; i < 20; ++i) {
		ChartFunction f = gen.function(), g = gen.function();
		CHECK(flat0.star(f, g, 3) == testing::moyal_star(f, g, 3));
	}

	// [cos x1, cos x2]_* = nu Lambda^{12} sin x1 sin x2 + O(nu^3)
	NuSeries<ChartFunction> comm = flat0.star_commutator(
	    NuSeries<ChartFunction>::constant(cs(1, 0), 3), NuSeries<ChartFunction>::constant(cs(0, 1), 3));
	CHECK(comm.coeff(0).is_zero());
	CHECK(comm.coeff(1) == (sn(1, 0) * sn(0, 1)).scaled(Rat(lambda_entry(t2, 0, 1))));
	CHECK(comm.coeff(2).is_zero());

	// the leading commutator term equals the Poisson bracket on any setup
	FedosovSetup curved = FedosovSetup::build(WeylContext::make(t2, 7, 2), curved_connection(), default_chi());
	for (int i = 0; i < 5; ++i) {
		ChartFunction f = gen.function(), g = gen.function();
		NuSeries<ChartFunction> c = curved.star_commutator(NuSeries<ChartFunction>::constant(f, 2),
		                                                   NuSeries<ChartFunction>::constant(g, 2));
		CHECK(c.coeff(0).is_zero());
		CHECK(c.coeff(1) == poisson_bracket(f, g));
	}
}

TEST_CASE("star associativity on a curved setup")
{
	auto ctx = WeylContext::make(t2, 7, 2);
	FedosovSetup setup = FedosovSetup::build(ctx, curved_connection(), default_chi());
	testing::RandomChart gen(t2, 44);
	for (int i = 0; i < 6; ++i) {
		ChartFunction f = gen.function(2, 1), g = gen.function(2, 1), h = gen.function(2, 1);
		NuSeries<ChartFunction> lhs = setup.star(setup.star(f, g), NuSeries<ChartFunction>::constant(h, 2));
		NuSeries<ChartFunction> rhs = setup.star(NuSeries<ChartFunction>::constant(f, 2), setup.star(g, h));
		CHECK(lhs == rhs);
	}
}

TEST_CASE("translation invariance of the flat star product")
{
	auto ctx = WeylContext::make(t2, 7, 2);
	FedosovSetup flat0 = FedosovSetup::build(ctx, Connection::flat(t2), NuSeries<DifferentialForm>(kExactOrder, 1));
	// shift by an angle with rational cosine and sine (a 3-4-5 rotation)
	Rat c = rat(3, 5), s = rat(4, 5);
	testing::RandomChart gen(t2, 45);
	for (int i = 0; i < 5; ++i) {
		ChartFunction f = gen.function(), g = gen.function();
		NuSeries<ChartFunction> direct = flat0.star(f, g);
		NuSeries<ChartFunction> shifted =
		    flat0.star(testing::shift_coordinate(f, 0, c, s), testing::shift_coordinate(g, 0, c, s));
		NuSeries<ChartFunction> moved = direct.transform(
		    [&](const ChartFunction &h) { return testing::shift_coordinate(h, 0, c, s); });
		CHECK(shifted == moved);
	}
}

TEST_CASE("d_inverse round trips")
{
	auto ctx = WeylContext::make(t2, 7, 2);
	FedosovSetup setup = FedosovSetup::build(ctx, curved_connection(), default_chi());
	FedosovSetup flat0 = FedosovSetup::build(ctx, Connection::flat(t2), NuSeries<DifferentialForm>(kExactOrder, 1));

	CHECK(setup.d_inverse(WeylElement(ctx)).is_zero());

	// flat: b = D(y1 y2) recovers y1 y2 (zero y=0 part)
	WeylElement y1y2(ctx);
	y1y2.add_term(WeylKey::make(0, {1, 1}, 0, 2), one());
	WeylElement b = flat0.apply_D(y1y2);
	CHECK(flat0.d_inverse(b) == y1y2);


	// random flat sections: strip sigma, apply D, invert
	testing::RandomChart gen(t2, 46);
	for (int i = 0; i < 6; ++i) {
		WeylElement c = setup.quantize(gen.function(2, 1));
		WeylElement c0 = c - WeylElement::from_series(ctx, sigma(c));
		// c0 is not D-closed in general, but D c0 is D-exact by construction
		// rhs is one application of D deep, so it is valid through K - 1
		WeylElement rhs = setup.apply_D(c0);
		WeylElement back = setup.d_inverse(rhs, 6);
		CHECK(equal_through(setup.apply_D(back), rhs, 5));
		CHECK(sigma(back).is_zero());
	}

	// inputs that are not D-closed carry the residual in a precondition error
	WeylElement notclosed(ctx);
	notclosed.add_term(WeylKey::make(0, {1, 0}, 1, 2), cs(0, 1));
	CHECK_THROWS_AS(setup.d_inverse(notclosed), Error);
}

TEST_CASE("stability under truncation refinement")
{
	// star coefficients through nu^N must not move when K -> K + 2
	Connection conn = curved_connection();
	DifferentialForm chi = default_chi();
	FedosovSetup a = FedosovSetup::build(WeylContext::make(t2, 7, 2), conn, chi);
	FedosovSetup b = FedosovSetup::build(WeylContext::make(t2, 9, 2), conn, chi);
	testing::RandomChart gen(t2, 47);
	for (int i = 0; i < 5; ++i) {
		ChartFunction f = gen.function(), g = gen.function();
		CHECK(a.star(f, g, 2) == b.star(f, g, 2));
	}
}
