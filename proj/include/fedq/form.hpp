#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fedq/chart.hpp"

namespace fedq {

// Exterior p-form with ChartFunction coefficients. Components are keyed by
// the bitmask of their strictly increasing index tuple, which makes
// antisymmetry structural: dx^J with a repeated index cannot be represented.
class DifferentialForm {
  public:
	DifferentialForm() = default;
	DifferentialForm(const ChartSpec &chart, int degree);

	// 0-form from a function.
	static DifferentialForm from_function(const ChartFunction &f);
	// c dx^{i1} ^ ... ^ dx^{ip}, 0-based indices, arbitrary order (sign fixed).
	static DifferentialForm monomial(const ChartFunction &c, const std::vector<int> &idx);

	const ChartSpec &chart() const { return chart_; }
	int degree() const { return degree_; }
	bool is_zero() const { return comps_.empty(); }
	ChartFunction component(std::uint8_t mask) const;

	DifferentialForm operator-() const;
	DifferentialForm &operator+=(const DifferentialForm &o);
	DifferentialForm &operator-=(const DifferentialForm &o);
	friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm &b) { return a += b; }
	friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm &b) { return a -= b; }
	friend bool operator==(const DifferentialForm &a, const DifferentialForm &b);

	DifferentialForm scaled(const ChartFunction &f) const;
	DifferentialForm scaled(const Rat &q) const;
	DifferentialForm scaled(const Scalar &s) const;

	// Jet passthroughs, coefficientwise.
	DifferentialForm jet_derivative(int gen) const;
	DifferentialForm jet_at_zero(int gen) const;
	DifferentialForm jet_truncated(int gen, int max_order) const;

	void add_term(std::uint8_t mask, const ChartFunction &c);
	const std::map<std::uint8_t, ChartFunction> &components() const { return comps_; }

	std::string str() const;

  private:
	ChartSpec chart_;
	int degree_ = 0;
	std::map<std::uint8_t, ChartFunction> comps_;
};

// Sign of merging dx^a ^ dx^b into dx^{a|b}; 0 when the masks overlap.
int wedge_sign(std::uint8_t a, std::uint8_t b);

DifferentialForm wedge(const DifferentialForm &a, const DifferentialForm &b);
DifferentialForm exterior_d(const DifferentialForm &a);
// Interior product with a coordinate direction or with a vector of components.
DifferentialForm contract(const DifferentialForm &a, const std::vector<ChartFunction> &field);

// Exact integral of f * volume over the torus: (2*pi)^{2m} times the constant
// Fourier coefficient of f * vol. Requires torus mode and a top-degree form.
PiScalar integrate_torus(const ChartFunction &f, const DifferentialForm &volume);

// Standard Darboux data on the chart: omega = sum dx^i ^ dx^{i+m}.
DifferentialForm standard_symplectic_form(const ChartSpec &chart);
// Matrix entries of omega and its inverse Lambda (Lambda^{ij} omega_{jk} = delta^i_k).
int omega_entry(const ChartSpec &chart, int i, int j);
int lambda_entry(const ChartSpec &chart, int i, int j);
// omega^m / m! (the Liouville volume form).
DifferentialForm liouville_volume(const ChartSpec &chart);

// {F,G} = Lambda^{ij} d_i F d_j G with Lambda the fixed inverse of omega.
ChartFunction poisson_bracket(const ChartFunction &f, const ChartFunction &g);

} // namespace fedq
