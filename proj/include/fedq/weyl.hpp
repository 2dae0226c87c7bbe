#pragma once

#include <memory>

#include "fedq/geometry.hpp"
#include "fedq/series.hpp"

namespace fedq {

// Shared immutable description of the truncated Weyl algebra over a chart.
// Total degree counts deg nu = 2 and deg y^i = 1; everything above
// trunc_degree (K) lives in the truncation ideal and is dropped. nu_order (N)
// is the default reporting order for star products; K >= 2N + 3.
class WeylContext {
  public:
	static std::shared_ptr<const WeylContext> make(const ChartSpec &chart, int trunc_degree, int nu_order);

	const ChartSpec &chart() const { return chart_; }
	int trunc_degree() const { return trunc_degree_; }
	int nu_order() const { return nu_order_; }

  private:
	ChartSpec chart_;
	int trunc_degree_ = 0;
	int nu_order_ = 0;
};

using WeylContextPtr = std::shared_ptr<const WeylContext>;

// Key of a Weyl term: nu power k, y multidegree, exterior index mask.
struct WeylKey {
	std::uint64_t bits = 0;

	static WeylKey make(int k, const std::array<int, kMaxDim> &ydeg, std::uint8_t mask, int dim);
	int nu() const { return static_cast<int>((bits >> 56) & 0xffu) - 64; }
	std::uint8_t mask() const { return static_cast<std::uint8_t>((bits >> 48) & 0xffu); }
	int ydeg(int i) const { return static_cast<int>((bits >> (8 * i)) & 0xffu); }
	int ytotal(int dim) const;
	int form_degree() const;
	// Total filtration degree 2k + |y|.
	int total_degree(int dim) const { return 2 * nu() + ytotal(dim); }

	friend auto operator<=>(const WeylKey &a, const WeylKey &b) = default;
};

// Truncated section of the Weyl algebra bundle tensored with forms. The
// extended flag marks W^+ sections: negative nu powers are allowed but every
// term keeps nonnegative total degree.
class WeylElement {
  public:
	WeylElement() = default;
	explicit WeylElement(WeylContextPtr ctx, bool extended = false) : ctx_(std::move(ctx)), extended_(extended) {}

	static WeylElement unit(WeylContextPtr ctx);
	static WeylElement from_function(WeylContextPtr ctx, const ChartFunction &f, int nu_power = 0);
	static WeylElement from_series(WeylContextPtr ctx, const NuSeries<ChartFunction> &f);
	// 2-form (or any form) placed at a nu power; no y content.
	static WeylElement from_form(WeylContextPtr ctx, const DifferentialForm &theta, int nu_power = 0);
	static WeylElement y_monomial(WeylContextPtr ctx, const std::array<int, kMaxDim> &ydeg,
	                              const ChartFunction &coeff, int nu_power = 0);

	const WeylContextPtr &context() const { return ctx_; }
	bool extended() const { return extended_; }
	WeylElement as_extended() const;
	bool is_zero() const { return terms_.empty(); }
	int min_total_degree() const; // K+1 when zero
	int max_form_degree() const;
	// All terms at y = 0, form degree 0, as a nu series (Laurent for W^+).
	NuSeries<ChartFunction> y0_part() const;

	WeylElement operator-() const;
	WeylElement &operator+=(const WeylElement &o);
	WeylElement &operator-=(const WeylElement &o);
	friend WeylElement operator+(WeylElement a, const WeylElement &b) { return a += b; }
	friend WeylElement operator-(WeylElement a, const WeylElement &b) { return a -= b; }
	friend bool operator==(const WeylElement &a, const WeylElement &b);

	WeylElement scaled(const Rat &q) const;
	WeylElement scaled(const Scalar &s) const;
	WeylElement scaled(const ChartFunction &f) const;
	// Multiply by nu^j (j may be negative; fails on non-extended underflow).
	WeylElement nu_shifted(int j) const;

	WeylElement jet_derivative(int gen) const;
	WeylElement jet_antiderivative(const JetRing *ring, int gen) const;
	WeylElement jet_truncated(int gen, int max_order) const;
	WeylElement jet_at_zero(int gen) const;
	WeylElement jet_coefficient(int gen, int power) const;
	int jet_degree(int gen) const;

	void add_term(const WeylKey &key, const ChartFunction &c);
	const std::map<WeylKey, ChartFunction> &terms() const { return terms_; }

	std::string str() const;

  private:
	WeylContextPtr ctx_;
	bool extended_ = false;
	std::map<WeylKey, ChartFunction> terms_;
};

// Fiberwise Moyal-type product extended to forms:
// (a (x) alpha) o (b (x) beta) = a o b  (x)  alpha ^ beta.
WeylElement circ(const WeylElement &a, const WeylElement &b);
// Graded commutator [a, b] = a o b - (-1)^{q_a q_b} b o a, per term degrees.
WeylElement commutator(const WeylElement &a, const WeylElement &b);
// (1/nu)(a o b) and (1/nu)[a, b] with truncation applied at the post-shift
// degree; this is the correct quotient-algebra action of degree-raising
// bracket operators near the top of the filtration.
WeylElement circ_over_nu(const WeylElement &a, const WeylElement &b);
WeylElement commutator_over_nu(const WeylElement &a, const WeylElement &b);
// Plain (symmetric x exterior) product without contractions.
WeylElement mul_pointwise(const WeylElement &a, const WeylElement &b);
// Only the (y = 0, 0-form) component of a o b, through nu order `cap`.
NuSeries<ChartFunction> circ_scalar_part(const WeylElement &a, const WeylElement &b, int cap);

// delta a = dx^k ^ d_{y^k} a.
WeylElement delta(const WeylElement &a);
// Degree-normalized partial inverse: (1/(p+q)) y^k i(d_{x^k}) on the (p,q)
// block, zero on the (0,0) block.
WeylElement delta_inv(const WeylElement &a);
// sigma: y = 0, 0-form part (alias of y0_part as an operation).
NuSeries<ChartFunction> sigma(const WeylElement &a);
// Termwise exterior derivative of coefficients: d a = dx^j ^ d_{x^j} a.
WeylElement d_x(const WeylElement &a);
// Interior product i(X) on the exterior part of a Weyl-valued form.
WeylElement contract_weyl(const WeylElement &a, const VectorField &x);

// Lifts of a symplectic connection into the bundle.
struct ConnectionLift {
	WeylElement gamma_bar; // (1/2) omega_{lk} Gamma^k_{ij} y^l y^j dx^i
	WeylElement r_bar;     // (1/4) omega_{ir} R^r_{jkl} y^i y^j dx^k ^ dx^l
};
ConnectionLift lift_connection(const WeylContextPtr &ctx, const Connection &conn);
// The induced derivation: da + (1/nu)[gamma_bar, a].
WeylElement covariant_deriv(const ConnectionLift &lift, const WeylElement &a);

// Tensorial pullback of a Weyl-valued form along a perturbative diffeo:
// coefficients compose, y^j and dx^j transform by the Jacobian.
WeylElement pullback_weyl(const WeylElement &a, const DiffeoFamily &f);

// Terms of total degree <= cutoff. Identities that involve delta (which
// lowers total degree) hold on the truncated bundle only below the top band;
// these helpers express "equal up to truncation" at a stated band.
WeylElement truncate_degree(const WeylElement &a, int cutoff);
bool is_zero_through(const WeylElement &a, int cutoff);
bool equal_through(const WeylElement &a, const WeylElement &b, int cutoff);

} // namespace fedq
