#pragma once

#include <optional>
#include <vector>

#include "fedq/form.hpp"

namespace fedq {

// Vector field on the chart, stored by components Y^k.
class VectorField {
  public:
	VectorField() = default;
	VectorField(const ChartSpec &chart, std::vector<ChartFunction> comps);
	static VectorField zero(const ChartSpec &chart);
	static VectorField coordinate(const ChartSpec &chart, int k); // d/dx^k

	const ChartSpec &chart() const { return chart_; }
	const ChartFunction &comp(int k) const { return comps_[static_cast<size_t>(k)]; }
	const std::vector<ChartFunction> &comps() const { return comps_; }
	bool is_zero() const;

	VectorField operator-() const;
	friend VectorField operator+(const VectorField &a, const VectorField &b);
	friend VectorField operator-(const VectorField &a, const VectorField &b);
	friend bool operator==(const VectorField &a, const VectorField &b);
	VectorField scaled(const Rat &q) const;
	VectorField scaled(const Scalar &s) const;

	// Directional derivative Y(f).
	ChartFunction apply(const ChartFunction &f) const;

  private:
	ChartSpec chart_;
	std::vector<ChartFunction> comps_;
};

// Totally symmetric covariant 3-tensor, entries stored on i <= j <= l.
class SymTensor3 {
  public:
	SymTensor3() = default;
	explicit SymTensor3(const ChartSpec &chart) : chart_(chart) {}

	const ChartSpec &chart() const { return chart_; }
	void set(int i, int j, int l, const ChartFunction &c);
	ChartFunction get(int i, int j, int l) const;
	bool is_zero() const { return entries_.empty(); }

  private:
	ChartSpec chart_;
	std::map<std::array<int, 3>, ChartFunction> entries_;
};

// Torsion-free affine connection given by Christoffel data Gamma^k_{ij},
// symmetric in (i,j). Symplecticity (total symmetry of omega_{lk}Gamma^k_{ij})
// is checked once and cached.
class Connection {
  public:
	Connection() = default;
	static Connection flat(const ChartSpec &chart);
	// Base connection plus a totally symmetric 3-tensor S: the affine-space
	// parametrization of symplectic connections. Result is symplectic when
	// the base is.
	static Connection with_potential(const Connection &base, const SymTensor3 &s);
	static Connection from_christoffels(const ChartSpec &chart, std::vector<ChartFunction> gamma);

	const ChartSpec &chart() const { return chart_; }
	const ChartFunction &gamma(int k, int i, int j) const;
	bool is_symplectic() const { return symplectic_; }

	friend bool operator==(const Connection &a, const Connection &b);
	Connection operator-() const = delete;
	friend Connection interpolate(const Connection &a, const Connection &b, const Scalar &t);

	// Difference tensor A^k_{ij} = gamma - base.gamma.
	std::vector<ChartFunction> difference(const Connection &base) const;

	Connection jet_at_zero(int gen) const;
	Connection jet_derivative(int gen) const;

  private:
	int idx(int k, int i, int j) const;
	ChartSpec chart_;
	std::vector<ChartFunction> gamma_; // dense [k][i][j]
	bool symplectic_ = false;
};

// Perturbative diffeomorphism f = id + u with u nilpotent in the jet
// generators; the inverse, Jacobian and inverse Jacobian are cached on
// construction. Models elements of the identity component of Diff(M).
class DiffeoFamily {
  public:
	DiffeoFamily() = default;
	static DiffeoFamily identity(const ChartSpec &chart);
	// Displacement components u^k; each must be nilpotent.
	static DiffeoFamily from_displacement(const ChartSpec &chart, std::vector<ChartFunction> u);
	// Flow jet of Y at the given generator: id + tY + (t^2/2) DY.Y + ...
	// `order` <= cap of the generator.
	static DiffeoFamily flow_jet(const VectorField &y, const JetRing *ring, int gen, int order);

	const ChartSpec &chart() const { return chart_; }
	const std::vector<ChartFunction> &displacement() const { return u_; }
	bool is_identity() const;
	const ChartFunction &jacobian(int k, int i) const { return jac_[static_cast<size_t>(k * chart_.dim() + i)]; }
	const ChartFunction &inv_jacobian(int k, int i) const
	{
		return inv_jac_[static_cast<size_t>(k * chart_.dim() + i)];
	}

	DiffeoFamily inverted() const;
	// Composition (a then applied after b): (a o b)(x) = a(b(x)).
	friend DiffeoFamily compose(const DiffeoFamily &a, const DiffeoFamily &b);

	DiffeoFamily jet_at_zero(int gen) const;

  private:
	ChartSpec chart_;
	std::vector<ChartFunction> u_;       // forward displacement
	std::vector<ChartFunction> inv_u_;   // displacement of the inverse
	std::vector<ChartFunction> jac_;     // J^k_i = delta + d_i u^k
	std::vector<ChartFunction> inv_jac_; // (J^{-1})^k_i at the source point
};

// f(x) = x + u(x) composed into a function: H o f, exact by nilpotency of u.
ChartFunction compose(const ChartFunction &h, const DiffeoFamily &f);
// Pullbacks / pushforwards along the family.
ChartFunction pullback(const ChartFunction &h, const DiffeoFamily &f);
DifferentialForm pullback(const DifferentialForm &theta, const DiffeoFamily &f);
VectorField pushforward(const VectorField &y, const DiffeoFamily &f);
VectorField pullback(const VectorField &y, const DiffeoFamily &f);

// Hamiltonian vector field: i(X_H) omega = dH (omega the standard Darboux form).
VectorField hamiltonian_vf(const ChartFunction &h);
VectorField lie_bracket(const VectorField &y, const VectorField &z);
// chi(Y, Z) for a 2-form chi.
ChartFunction evaluate_2form(const DifferentialForm &chi, const VectorField &y, const VectorField &z);

// The tensor turning a torsion-free connection into a symplectic one:
// omega(N(X,Y),Z) = (nabla_X omega)(Y,Z).
std::vector<ChartFunction> n_tensor(const Connection &conn);
// nabla + (1/3) N(X,Y) + (1/3) N(Y,X); the result passes the symplecticity check.
Connection n_symmetrize(const Connection &conn);
// Classical Christoffel transformation law along f.
Connection pullback_connection(const DiffeoFamily &f, const Connection &conn);
// The symplectic-connection attachment: n_symmetrize(pullback_connection(f, conn)).
Connection pi_nabla(const DiffeoFamily &f, const Connection &conn);

// Curvature components R^r_{jkl} = (R(e_k, e_l) e_j)^r, dense storage.
class CurvatureTensor {
  public:
	explicit CurvatureTensor(const Connection &conn);
	const ChartSpec &chart() const { return chart_; }
	const ChartFunction &at(int r, int j, int k, int l) const;

  private:
	ChartSpec chart_;
	std::vector<ChartFunction> r_;
};

// Second covariant derivative (Hessian) of a function: (nabla^2 H)_{kq}.
ChartFunction covariant_hessian(const Connection &conn, const ChartFunction &h, int k, int q);

} // namespace fedq
