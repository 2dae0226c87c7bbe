#include "fedq/fedosov.hpp"

#include "fedq/error.hpp"

namespace fedq {

FedosovSetup FedosovSetup::build(WeylContextPtr ctx, const Connection &conn, const DifferentialForm &chi)
{
	NuSeries<DifferentialForm> omega(kExactOrder, 1);
	omega.set(1, chi);
	return build(std::move(ctx), conn, omega);
}

FedosovSetup FedosovSetup::build(WeylContextPtr ctx, const Connection &conn,
                                 const NuSeries<DifferentialForm> &omega)
{
	if (!conn.is_symplectic())
		fail(errc::precondition, "Fedosov setup needs a symplectic connection");
	if (omega.floor() < 1)
		fail(errc::precondition, "the central 2-form must start at nu order >= 1");
	FedosovSetup s;
	s.ctx_ = std::move(ctx);
	s.conn_ = conn;
	s.lift_ = lift_connection(s.ctx_, conn);
	s.omega_elem_ = WeylElement(s.ctx_);
	for (const auto &c : omega.coefficients()) {
		if (c.second.degree() != 2)
			fail(errc::precondition, "the central form must be a 2-form");
		if (!exterior_d(c.second).is_zero())
			fail(errc::precondition, "the central 2-form must be closed");
		s.omega_elem_ += WeylElement::from_form(s.ctx_, c.second, c.first);
	}

	// r <- delta_inv(R_bar + del r + (1/nu) r o r - Omega), iterated from 0.
	// Each pass determines exactly one more total degree; the audit checks
	// that the freshly written band is the only change.
	const int cap = s.ctx_->trunc_degree();
	WeylElement r(s.ctx_);
	int settled = 2; // degrees <= settled are final
	for (int iter = 0;; ++iter) {
		WeylElement rhs = s.lift_.r_bar + covariant_deriv(s.lift_, r) + circ_over_nu(r, r) - s.omega_elem_;
		WeylElement next = delta_inv(rhs);
		if (next == r)
			break;
		if (iter > cap + 2)
			fail(errc::solver, "Fedosov iteration failed to close (truncation bug)");
		if (!equal_through(next, r, settled))
			fail(errc::solver, "Fedosov iteration rewrote a settled degree");
		settled += 1;
		r = std::move(next);
	}
	s.r_ = std::move(r);

	if (!delta_inv(s.r_).is_zero())
		fail(errc::internal, "solved r violates the normalization delta_inv r = 0");
	if (!s.r_.is_zero()) {
		if (s.r_.min_total_degree() < 3)
			fail(errc::internal, "solved r has total degree below 3");
		for (const auto &t : s.r_.terms())
			if (t.first.form_degree() != 1)
				fail(errc::internal, "solved r is not 1-form valued");
	}
	// The equation holds through degree K - 1: its degree-d component uses
	// the degree d + 1 part of r via delta, which is absent at the top band.
	if (!is_zero_through(s.fedosov_residual(), cap - 1))
		fail(errc::internal, "Fedosov equation residual is nonzero below the top band");
	return s;
}

WeylElement FedosovSetup::apply_D(const WeylElement &a) const
{
	WeylElement out = covariant_deriv(lift_, a) - delta(a);
	if (!r_.is_zero())
		out += commutator_over_nu(r_, a);
	return out;
}

WeylElement FedosovSetup::fedosov_residual() const
{
	return lift_.r_bar + covariant_deriv(lift_, r_) - delta(r_) + circ_over_nu(r_, r_) - omega_elem_;
}

WeylElement FedosovSetup::q_lift(const WeylElement &seed) const
{
	WeylElement acc = seed;
	WeylElement inc = seed;
	const int cap = ctx_->trunc_degree();
	for (int guard = 0;; ++guard) {
		WeylElement step = covariant_deriv(lift_, inc);
		if (!r_.is_zero())
			step += commutator_over_nu(r_, inc);
		inc = delta_inv(step);
		if (inc.is_zero())
			break;
		acc += inc;
		if (guard > cap + 2)
			fail(errc::solver, "Q lift failed to terminate");
	}
	return acc;
}

WeylElement FedosovSetup::quantize(const NuSeries<ChartFunction> &f) const
{
	if (f.floor() < 0 && f.lowest() < 0)
		fail(errc::precondition, "Q acts on formal functions without negative nu powers");
	return q_lift(WeylElement::from_series(ctx_, f));
}

WeylElement FedosovSetup::quantize(const ChartFunction &f) const
{
	return q_lift(WeylElement::from_function(ctx_, f));
}

WeylElement FedosovSetup::d_inverse(const WeylElement &b, int degree_validity, int jet_gen,
                                    int jet_valid) const
{
	if (b.is_zero())
		return WeylElement(ctx_);
	for (const auto &t : b.terms())
		if (t.first.form_degree() != 1)
			fail(errc::precondition, "d_inverse needs a 1-form-valued input");
	if (degree_validity < 0)
		degree_validity = ctx_->trunc_degree();
	// one delta of validity is spent by each application of D
	const int band = std::min(degree_validity, ctx_->trunc_degree()) - 1;
	auto valid_part = [&](const WeylElement &x) {
		return jet_gen >= 0 ? x.jet_truncated(jet_gen, jet_valid) : x;
	};
	WeylElement residual = valid_part(apply_D(b));
	if (!is_zero_through(residual, band))
		fail(errc::precondition, "d_inverse input is not D-closed; residual = " + residual.str());
	WeylElement a = -q_lift(delta_inv(b));
	if (!is_zero_through(valid_part(apply_D(a) - b), band))
		fail(errc::internal, "d_inverse postcondition D a = b failed");
	if (!sigma(a).is_zero())
		fail(errc::internal, "d_inverse postcondition a|_{y=0} = 0 failed");
	return a;
}

NuSeries<ChartFunction> FedosovSetup::star(const NuSeries<ChartFunction> &f, const NuSeries<ChartFunction> &g,
                                           int cap) const
{
	int n = cap >= 0 ? cap : ctx_->nu_order();
	n = std::min({n, f.cap(), g.cap()});
	return circ_scalar_part(quantize(f), quantize(g), n);
}

NuSeries<ChartFunction> FedosovSetup::star(const ChartFunction &f, const ChartFunction &g, int cap) const
{
	int n = cap >= 0 ? cap : ctx_->nu_order();
	return circ_scalar_part(quantize(f), quantize(g), n);
}

NuSeries<ChartFunction> FedosovSetup::star_commutator(const NuSeries<ChartFunction> &f,
                                                      const NuSeries<ChartFunction> &g, int cap) const
{
	int n = cap >= 0 ? cap : ctx_->nu_order();
	n = std::min({n, f.cap(), g.cap()});
	WeylElement qf = quantize(f), qg = quantize(g);
	return circ_scalar_part(qf, qg, n) - circ_scalar_part(qg, qf, n);
}

FedosovSetup FedosovSetup::jet_at_zero(int gen) const
{
	FedosovSetup s;
	s.ctx_ = ctx_;
	s.conn_ = conn_.jet_at_zero(gen);
	s.lift_ = ConnectionLift{lift_.gamma_bar.jet_at_zero(gen), lift_.r_bar.jet_at_zero(gen)};
	s.omega_elem_ = omega_elem_.jet_at_zero(gen);
	s.r_ = r_.jet_at_zero(gen);
	return s;
}

} // namespace fedq
