#pragma once

#include "fedq/weyl.hpp"

namespace fedq {

// A solved Fedosov setup on a chart: symplectic connection, central 2-form
// series Omega (here always nu times a closed 2-form), the lifted data, and
// the unique r with delta_inv r = 0 solving
//     R_bar + del r - delta r + (1/nu) r o r = Omega.
// The induced flat connection is D = del - delta + (1/nu)[r, .]; flat
// sections correspond to formal functions through sigma / Q, and the star
// product is sigma(QF o QG).
class FedosovSetup {
  public:
	FedosovSetup() = default;

	// Omega given as a nu-series of closed 2-forms with floor >= 1; the
	// common case Omega = nu * chi has the series concentrated at order 1.
	static FedosovSetup build(WeylContextPtr ctx, const Connection &conn,
	                          const NuSeries<DifferentialForm> &omega);
	static FedosovSetup build(WeylContextPtr ctx, const Connection &conn, const DifferentialForm &chi);

	const WeylContextPtr &context() const { return ctx_; }
	const Connection &connection() const { return conn_; }
	const ConnectionLift &lift() const { return lift_; }
	const WeylElement &r() const { return r_; }
	const WeylElement &omega_element() const { return omega_elem_; }

	// D a = del a - delta a + (1/nu)[r, a].
	WeylElement apply_D(const WeylElement &a) const;
	// Should be identically zero for the solved r.
	WeylElement fedosov_residual() const;

	// Q on formal functions: the unique flat section with sigma(QF) = F.
	WeylElement quantize(const NuSeries<ChartFunction> &f) const;
	WeylElement quantize(const ChartFunction &f) const;
	// The geometric series sum_k (delta_inv (del + (1/nu)[r,.]))^k applied to
	// an arbitrary element (the operator raises total degree, so it ends).
	WeylElement q_lift(const WeylElement &seed) const;

	// Solution a of D a = b with a|_{y=0} = 0 for D-closed 1-form-valued b;
	// rejects inputs with D b != 0, carrying the residual in the message.
	// degree_validity states through which total degree b is trustworthy
	// (default: the full truncation degree); applying D spends one degree,
	// so the closedness and round-trip checks run one band below it. When b
	// comes from differentiating a jet of order J, it is complete only
	// through jet order J - 1: pass (jet_gen, jet_valid) to restrict the
	// checks to the valid jet orders.
	WeylElement d_inverse(const WeylElement &b, int degree_validity = -1, int jet_gen = -1,
	                      int jet_valid = 0) const;

	// Star product through nu order `cap` (default: the context's order).
	NuSeries<ChartFunction> star(const NuSeries<ChartFunction> &f, const NuSeries<ChartFunction> &g,
	                             int cap = -1) const;
	NuSeries<ChartFunction> star(const ChartFunction &f, const ChartFunction &g, int cap = -1) const;
	// Star commutator [f, g]_* = f*g - g*f.
	NuSeries<ChartFunction> star_commutator(const NuSeries<ChartFunction> &f,
	                                        const NuSeries<ChartFunction> &g, int cap = -1) const;

	// Slice of the setup at jet parameter = 0 (substitution commutes with the
	// whole construction, so the sliced r solves the sliced equation).
	FedosovSetup jet_at_zero(int gen) const;

  private:
	WeylContextPtr ctx_;
	Connection conn_;
	ConnectionLift lift_;
	WeylElement omega_elem_;
	WeylElement r_;
};

} // namespace fedq
