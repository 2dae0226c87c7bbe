#include "fedq/transport.hpp"

#include "fedq/error.hpp"

namespace fedq {

namespace {

WeylElement theta_element(const WeylContextPtr &ctx, const DifferentialForm &theta)
{
	return WeylElement::from_form(ctx, theta, 1);
}

NuSeries<ChartFunction> clamp_series(const NuSeries<ChartFunction> &s, int cap, const char *who)
{
	NuSeries<ChartFunction> out(cap, 0);
	for (const auto &c : s.coefficients()) {
		if (c.first < 0)
			fail(errc::internal, std::string(who) + " produced negative nu powers");
		if (c.first <= cap)
			out.set(c.first, c.second);
	}
	return out;
}

} // namespace

GeometryPath flow_path(const Connection &base, const DifferentialForm &chi, const DiffeoFamily &f,
                       const VectorField &y, const JetRing *ring, int tgen, int order)
{
	DiffeoFamily ft = compose(DiffeoFamily::flow_jet(y, ring, tgen, order), f);
	GeometryPath path;
	path.ring = ring;
	path.tgen = tgen;
	path.order = order;
	path.conn = pi_nabla(ft, base);
	path.chi = pullback(chi, ft);
	path.theta = pullback(contract(chi, y.comps()), ft);
	return path;
}

GeometryPath segment_path(const Connection &from, const Connection &to, const DifferentialForm &chi,
                          const JetRing *ring, int tgen)
{
	GeometryPath path;
	path.ring = ring;
	path.tgen = tgen;
	path.order = 1;
	path.conn = interpolate(from, to, Scalar::generator(ring, tgen));
	path.chi = chi;
	path.theta = DifferentialForm(chi.chart(), 1);
	return path;
}

TransportResult build_transport(WeylContextPtr ctx, const GeometryPath &path)
{
	if (path.ring == nullptr || path.tgen < 0)
		fail(errc::precondition, "geometry path needs a jet generator");
	// d theta_t = (d/dt) chi_t, exactly per valid jet order
	if (!(exterior_d(path.theta).jet_truncated(path.tgen, path.order - 1) ==
	      path.chi.jet_derivative(path.tgen).jet_truncated(path.tgen, path.order - 1)))
		fail(errc::precondition, "theta is not a primitive of d chi/dt");

	TransportResult tr;
	tr.tgen_ = path.tgen;
	tr.order_ = path.order;
	tr.setup_t_ = FedosovSetup::build(ctx, path.conn, path.chi);
	tr.setup0_ = tr.setup_t_.jet_at_zero(path.tgen);

	// differentiating a jet of order J leaves data complete through J - 1
	const int valid = path.order - 1;
	WeylElement b = (tr.setup_t_.lift().gamma_bar.jet_derivative(path.tgen) +
	                 tr.setup_t_.r().jet_derivative(path.tgen) - theta_element(ctx, path.theta))
	                    .jet_truncated(path.tgen, valid);
	tr.h_ = -tr.setup_t_.d_inverse(b, -1, path.tgen, valid);

	// dv/dt = (1/nu) h o v, v(0) = 1, solved by formal integration in t;
	// every pass settles one more jet order.
	WeylElement unit = WeylElement::unit(ctx).as_extended();
	WeylElement v = unit;
	for (int pass = 0; pass <= path.order + 1; ++pass) {
		WeylElement next = unit + circ_over_nu(tr.h_, v).jet_antiderivative(path.ring, path.tgen);
		if (next == v)
			break;
		v = std::move(next);
		if (pass == path.order + 1)
			fail(errc::solver, "transport ODE failed to close at the jet order");
	}
	if (!(v.jet_at_zero(path.tgen) == unit))
		fail(errc::internal, "transport element does not start at 1");
	tr.v_ = v;

	// v^{-1} by the geometric series in the jet-nilpotent part of v.
	WeylElement w = unit;
	WeylElement s = v - unit;
	for (int guard = 0;; ++guard) {
		WeylElement next = unit - circ(s, w);
		if (next == w)
			break;
		w = std::move(next);
		if (guard > 16)
			fail(errc::solver, "transport inverse failed to close");
	}
	if (!(circ(tr.v_, w) == unit) || !(circ(w, tr.v_) == unit))
		fail(errc::internal, "transport inverse check failed");
	tr.v_inv_ = std::move(w);
	return tr;
}

WeylElement TransportResult::conjugate(const WeylElement &a) const
{
	return circ(circ(v_, a), v_inv_);
}

NuSeries<ChartFunction> TransportResult::map_function(const NuSeries<ChartFunction> &f) const
{
	WeylElement image = conjugate(setup0_.quantize(f));
	return clamp_series(sigma(image), setup0_.context()->nu_order(), "transport map");
}

NuSeries<ChartFunction> TransportResult::map_function(const ChartFunction &f) const
{
	return map_function(NuSeries<ChartFunction>::constant(f, kExactOrder));
}

FiberData make_fiber(const WeylContextPtr &ctx, const Connection &base, const DifferentialForm &chi,
                     const DiffeoFamily &f)
{
	FiberData fiber;
	fiber.f = f;
	fiber.conn_f = pi_nabla(f, base);
	fiber.chi_f = pullback(chi, f);
	fiber.setup = FedosovSetup::build(ctx, fiber.conn_f, fiber.chi_f);
	return fiber;
}

namespace {

// alpha from an already-solved setup along the flow through f. setup_moved
// must be the Fedosov setup of (pi_nabla(flow_t(y) o f, base), nu (.)^*chi)
// carrying the generator tgen; setup_f its slice at tgen = 0.
WeylElement alpha_from_setups(const FedosovSetup &setup_moved, const FedosovSetup &setup_f,
                              const DifferentialForm &chi, const DiffeoFamily &f, const VectorField &y,
                              int tgen)
{
	const WeylContextPtr &ctx = setup_moved.context();
	WeylElement b = (setup_moved.lift().gamma_bar.jet_derivative(tgen) +
	                 setup_moved.r().jet_derivative(tgen))
	                    .jet_at_zero(tgen);
	DifferentialForm pulled = pullback(contract(chi, y.comps()), f);
	b -= WeylElement::from_form(ctx, pulled, 1);
	WeylElement alpha = setup_f.d_inverse(b);
	if (!alpha.is_zero() && alpha.min_total_degree() < 3)
		fail(errc::internal, "alpha has total degree below 3");
	return alpha;
}

} // namespace

WeylElement alpha_form(const WeylContextPtr &ctx, const Connection &base, const DifferentialForm &chi,
                       const DiffeoFamily &f, const VectorField &y, const JetRing *ring, int tgen)
{
	DiffeoFamily moved = compose(DiffeoFamily::flow_jet(y, ring, tgen, 1), f);
	FedosovSetup setup_moved = FedosovSetup::build(ctx, pi_nabla(moved, base), pullback(chi, moved));
	FedosovSetup setup_f = setup_moved.jet_at_zero(tgen);
	return alpha_from_setups(setup_moved, setup_f, chi, f, y, tgen);
}

NuSeries<ChartFunction> beta_apply(const FedosovSetup &setup_f, const WeylElement &alpha,
                                   const NuSeries<ChartFunction> &f)
{
	WeylElement bracket = commutator_over_nu(alpha, setup_f.quantize(f));
	return clamp_series(sigma(bracket), setup_f.context()->nu_order(), "beta");
}

CurvatureData curvature_R(const WeylContextPtr &ctx, const Connection &base, const DifferentialForm &chi,
                          const DiffeoFamily &f, const VectorField &y, const VectorField &z,
                          const JetRing *ring, int tgen_outer, int tgen_inner)
{
	CurvatureData data;
	data.tgen_outer = tgen_outer;
	data.tgen_inner = tgen_inner;

	// moved base points along the two flows (outer generator)
	data.moved_y = compose(DiffeoFamily::flow_jet(y, ring, tgen_outer, 1), f);
	data.moved_z = compose(DiffeoFamily::flow_jet(z, ring, tgen_outer, 1), f);

	// setup along the inner flow through each moved point (both generators)
	DiffeoFamily zy = compose(DiffeoFamily::flow_jet(z, ring, tgen_inner, 1), data.moved_y);
	DiffeoFamily yz = compose(DiffeoFamily::flow_jet(y, ring, tgen_inner, 1), data.moved_z);
	FedosovSetup setup_zy = FedosovSetup::build(ctx, pi_nabla(zy, base), pullback(chi, zy));
	FedosovSetup setup_yz = FedosovSetup::build(ctx, pi_nabla(yz, base), pullback(chi, yz));
	data.setup_along_y = setup_zy.jet_at_zero(tgen_inner); // fiber at moved_y, carries tgen_outer
	data.setup_along_z = setup_yz.jet_at_zero(tgen_inner);

	// the fiber at f itself, by slicing the outer generator away
	data.fiber.f = f;
	data.fiber.conn_f = pi_nabla(f, base);
	data.fiber.chi_f = pullback(chi, f);
	data.fiber.setup = data.setup_along_y.jet_at_zero(tgen_outer);

	// alpha at the moved points (inner derivative), still carrying tgen_outer
	data.alpha_z_along_y =
	    alpha_from_setups(setup_zy, data.setup_along_y, chi, data.moved_y, z, tgen_inner);
	data.alpha_y_along_z =
	    alpha_from_setups(setup_yz, data.setup_along_z, chi, data.moved_z, y, tgen_inner);
	data.alpha_y = data.alpha_y_along_z.jet_at_zero(tgen_outer);
	data.alpha_z = data.alpha_z_along_y.jet_at_zero(tgen_outer);

	// alpha of the Lie bracket direction at f
	VectorField w = lie_bracket(y, z);
	DiffeoFamily moved_w = compose(DiffeoFamily::flow_jet(w, ring, tgen_inner, 1), f);
	FedosovSetup setup_w = FedosovSetup::build(ctx, pi_nabla(moved_w, base), pullback(chi, moved_w));
	data.alpha_bracket =
	    alpha_from_setups(setup_w, data.fiber.setup, chi, f, w, tgen_inner);

	// d alpha(Y o f, Z o f) on right-invariant extensions
	WeylElement d_alpha = data.alpha_z_along_y.jet_derivative(tgen_outer).jet_at_zero(tgen_outer) -
	                      data.alpha_y_along_z.jet_derivative(tgen_outer).jet_at_zero(tgen_outer) -
	                      data.alpha_bracket;

	data.chi_term =
	    -WeylElement::from_function(ctx, pullback(evaluate_2form(chi, y, z), f), 1);
	data.big_r = data.chi_term + d_alpha + commutator_over_nu(data.alpha_y, data.alpha_z);
	return data;
}

CurvatureChecks verify_curvature(const CurvatureData &data, const ChartFunction &f_test)
{
	CurvatureChecks checks;
	const FedosovSetup &setup = data.fiber.setup;
	const int cap = setup.context()->nu_order();

	checks.d_flat_residual = setup.apply_D(data.big_r);

	checks.leading = clamp_series(sigma(data.big_r - data.chi_term), 1, "curvature leading term");

	// Eq-(7) agreement: (1/nu)[R, QF]|_{y=0} against the independently
	// computed commutator of formal-connection derivatives on the constant
	// section F.
	NuSeries<ChartFunction> rhs =
	    clamp_series(sigma(commutator_over_nu(data.big_r, setup.quantize(f_test))), cap, "eq7 rhs");

	NuSeries<ChartFunction> fconst = NuSeries<ChartFunction>::constant(f_test, kExactOrder);
	// S(t) = beta_{moved(t)}(Z o moved(t))(F), then D_Y (D_Z F) = dS/dt|_0 + beta(Y)(S(0))
	auto nested = [&](const FedosovSetup &setup_along, const WeylElement &alpha_along,
	                  const WeylElement &alpha_outer) {
		WeylElement bracket = commutator_over_nu(alpha_along, setup_along.quantize(fconst));
		NuSeries<ChartFunction> s_t = clamp_series(sigma(bracket), cap, "eq7 nested");
		NuSeries<ChartFunction> ds =
		    s_t.transform([&](const ChartFunction &c) { return c.jet_derivative(data.tgen_outer).jet_at_zero(data.tgen_outer); });
		NuSeries<ChartFunction> s0 =
		    s_t.transform([&](const ChartFunction &c) { return c.jet_at_zero(data.tgen_outer); });
		return ds + beta_apply(setup, alpha_outer, s0);
	};
	NuSeries<ChartFunction> lhs = nested(data.setup_along_y, data.alpha_z_along_y, data.alpha_y) -
	                              nested(data.setup_along_z, data.alpha_y_along_z, data.alpha_z) -
	                              beta_apply(setup, data.alpha_bracket, fconst);
	checks.eq7_residual = lhs - rhs;
	return checks;
}

HamAutomorphism ham_automorphism(const WeylContextPtr &ctx, const Connection &base,
                                 const DifferentialForm &chi, const ChartFunction &h, const JetRing *ring,
                                 int tgen)
{
	HamAutomorphism ham;
	ham.tgen = tgen;
	ham.x_h = hamiltonian_vf(h);
	ham.flow = DiffeoFamily::flow_jet(ham.x_h, ring, tgen, 1);
	GeometryPath path =
	    flow_path(base, chi, DiffeoFamily::identity(chi.chart()), ham.x_h, ring, tgen, 1);
	ham.transport = build_transport(ctx, path);
	return ham;
}

NuSeries<ChartFunction> HamAutomorphism::map_function(const NuSeries<ChartFunction> &f) const
{
	NuSeries<ChartFunction> inner = transport.map_function(f);
	DiffeoFamily inv = flow.inverted();
	return inner.transform([&](const ChartFunction &c) { return compose(c, inv); });
}

NuSeries<ChartFunction> HamAutomorphism::map_function(const ChartFunction &f) const
{
	return map_function(NuSeries<ChartFunction>::constant(f, kExactOrder));
}

NuSeries<ChartFunction> HamAutomorphism::ode_residual(const ChartFunction &h, const ChartFunction &f) const
{
	const FedosovSetup &setup0 = transport.setup_start();
	const int cap = setup0.context()->nu_order() - 1;
	NuSeries<ChartFunction> bt = map_function(f);
	NuSeries<ChartFunction> db =
	    bt.transform([&](const ChartFunction &c) { return c.jet_derivative(tgen); });
	NuSeries<ChartFunction> comm =
	    setup0.star_commutator(NuSeries<ChartFunction>::constant(h, kExactOrder), bt);
	if (!comm.coeff(0).is_zero())
		fail(errc::internal, "star commutator with nonzero classical term");
	NuSeries<ChartFunction> residual = (db + comm.shifted(-1)).truncated(cap);
	// the transport element is known through jet order 1: report at order 0
	return residual.transform([&](const ChartFunction &c) { return c.jet_at_zero(tgen); });
}

WeylElement action_derivative_residual(const FedosovSetup &setup, const ChartFunction &h,
                                       const WeylElement &a, const JetRing *ring, int tgen)
{
	const WeylContextPtr &ctx = setup.context();
	const ChartSpec chart = ctx->chart();
	VectorField x = hamiltonian_vf(h);
	DiffeoFamily flow = DiffeoFamily::flow_jet(x, ring, tgen, 1);

	WeylElement lhs = pullback_weyl(a, flow).jet_derivative(tgen).jet_at_zero(tgen);

	// kernel: -omega_{ij} y^i X^j + (1/2)(nabla^2 H)_{kq} y^k y^q - i(X) r
	WeylElement kernel(ctx);
	for (int i = 0; i < chart.dim(); ++i)
		for (int j = 0; j < chart.dim(); ++j) {
			int w = omega_entry(chart, i, j);
			if (w == 0)
				continue;
			std::array<int, kMaxDim> e{};
			e[static_cast<size_t>(i)] = 1;
			kernel += WeylElement::y_monomial(ctx, e, x.comp(j).scaled(Rat(-w)));
		}
	for (int k = 0; k < chart.dim(); ++k)
		for (int q = 0; q < chart.dim(); ++q) {
			std::array<int, kMaxDim> e{};
			e[static_cast<size_t>(k)] += 1;
			e[static_cast<size_t>(q)] += 1;
			kernel += WeylElement::y_monomial(ctx, e,
			                                  covariant_hessian(setup.connection(), h, k, q).scaled(rat(1, 2)));
		}
	kernel -= contract_weyl(setup.r(), x);

	WeylElement rhs = contract_weyl(setup.apply_D(a), x) + setup.apply_D(contract_weyl(a, x)) +
	                  commutator_over_nu(kernel, a);
	return lhs - rhs;
}

} // namespace fedq
