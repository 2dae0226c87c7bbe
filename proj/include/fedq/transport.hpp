#pragma once

#include "fedq/fedosov.hpp"

namespace fedq {

// A jet (order <= 2) of geometric data along a path: symplectic connections
// t -> conn(t), 2-forms t -> chi(t), and a primitive path theta with
// d theta_t = (d/dt) chi_t, supplied and checked rather than solved for.
struct GeometryPath {
	const JetRing *ring = nullptr;
	int tgen = -1;
	int order = 1;
	Connection conn;
	DifferentialForm chi;
	DifferentialForm theta;
};

// Path along the flow of Y through f with the canonical primitive
// theta_t = f_t^* i(Y) chi, where f_t = (flow of Y at time t) o f.
GeometryPath flow_path(const Connection &base, const DifferentialForm &chi, const DiffeoFamily &f,
                       const VectorField &y, const JetRing *ring, int tgen, int order);
// Linear segment of symplectic connections from `from` to `to` with chi and
// theta constant (theta = 0 unless chi actually moves).
GeometryPath segment_path(const Connection &from, const Connection &to, const DifferentialForm &chi,
                          const JetRing *ring, int tgen);

// The lifted equivalence along a geometry path: h generates the transport
// element v in W+, and the induced algebra map is B(a) = v o a o v^{-1}.
class TransportResult {
  public:
	const FedosovSetup &setup_path() const { return setup_t_; }
	const FedosovSetup &setup_start() const { return setup0_; }
	const WeylElement &generator() const { return h_; }
	const WeylElement &v() const { return v_; }
	const WeylElement &v_inverse() const { return v_inv_; }
	int tgen() const { return tgen_; }

	WeylElement conjugate(const WeylElement &a) const;
	// B on formal functions: sigma(v o Q^0(F) o v^{-1}), truncated at the
	// context nu order. The result must have no negative nu powers.
	NuSeries<ChartFunction> map_function(const NuSeries<ChartFunction> &f) const;
	NuSeries<ChartFunction> map_function(const ChartFunction &f) const;

	friend TransportResult build_transport(WeylContextPtr ctx, const GeometryPath &path);

  private:
	FedosovSetup setup_t_, setup0_;
	WeylElement h_, v_, v_inv_;
	int tgen_ = -1;
	int order_ = 1;
};

// Solves Theorem-2.5-style transport: h = -D^{-1}(d Gamma_bar/dt + dr/dt -
// nu theta), then dv/dt = (1/nu) h o v with v(0) = 1 by formal integration.
TransportResult build_transport(WeylContextPtr ctx, const GeometryPath &path);

// The Fedosov data attached to a diffeomorphism: conn_f = pi_nabla(f, base),
// chi_f = f^* chi, and the solved setup with Omega = nu chi_f.
struct FiberData {
	DiffeoFamily f;
	Connection conn_f;
	DifferentialForm chi_f;
	FedosovSetup setup;
};
FiberData make_fiber(const WeylContextPtr &ctx, const Connection &base, const DifferentialForm &chi,
                     const DiffeoFamily &f);

// The connection 1-form evaluated on the tangent vector Y o f:
//   alpha_f(Y o f) = (D^f)^{-1}( d/dt|_0 Gamma_bar^{f_t} + d/dt|_0 r^{f_t}
//                                - nu f^* i(Y) chi ),  f_t = flow_t(Y) o f.
// The Fedosov recursion runs over jet scalars in the generator `tgen`; the
// base family f may carry other generators. alpha lands in total degree >= 3.
WeylElement alpha_form(const WeylContextPtr &ctx, const Connection &base, const DifferentialForm &chi,
                       const DiffeoFamily &f, const VectorField &y, const JetRing *ring, int tgen);

// beta_f(Y o f)(F) = (1/nu)[alpha, Q^f(F)]|_{y=0}.
NuSeries<ChartFunction> beta_apply(const FedosovSetup &setup_f, const WeylElement &alpha,
                                   const NuSeries<ChartFunction> &f);

// Curvature data of the formal connection at (f; Y, Z):
//   R = -nu f^*(chi(Y,Z)) + d alpha(Y o f, Z o f) + (1/nu)[alpha(Y), alpha(Z)]
// with the differential of alpha on right-invariant fields evaluated through
// mixed jets: d alpha(Y,Z) = Y(alpha(Z)) - Z(alpha(Y)) - alpha([Y,Z] o f).
struct CurvatureData {
	WeylElement big_r;
	WeylElement chi_term; // -nu f^*(chi(Y,Z)) as an element
	WeylElement alpha_y, alpha_z, alpha_bracket;
	// alpha along the moved base point, still carrying the outer generator.
	WeylElement alpha_z_along_y, alpha_y_along_z;
	FiberData fiber;              // at f
	FedosovSetup setup_along_y;   // jets of the fiber along the flow of Y (carries tgen_outer)
	FedosovSetup setup_along_z;
	DiffeoFamily moved_y, moved_z; // flow(Y) o f, flow(Z) o f (carry tgen_outer)
	int tgen_outer = -1, tgen_inner = -1;
};
CurvatureData curvature_R(const WeylContextPtr &ctx, const Connection &base, const DifferentialForm &chi,
                          const DiffeoFamily &f, const VectorField &y, const VectorField &z,
                          const JetRing *ring, int tgen_outer, int tgen_inner);

// Residuals of the three Theorem-3.1-style assertions for a curvature datum;
// every returned element/series must vanish (through the stated bands).
struct CurvatureChecks {
	WeylElement d_flat_residual;         // D^f R, zero through K-1
	NuSeries<ChartFunction> leading;     // R|_{y=0} + nu f^*(chi(Y,Z)): O(nu^2)
	NuSeries<ChartFunction> eq7_residual; // (1/nu)[R,QF]|_{y=0} minus the D-commutator route
};
CurvatureChecks verify_curvature(const CurvatureData &data, const ChartFunction &f_test);

// Prop-3.9-style Hamiltonian automorphism data: transport along the path
// (phi_t^* nabla, phi_t^* chi) with the canonical theta, and
// B_t(F) = (phi_t^{-1})^* sigma(v_t o Q(F) o v_t^{-1}).
struct HamAutomorphism {
	TransportResult transport;
	DiffeoFamily flow;  // carries tgen
	VectorField x_h;
	int tgen = -1;
	// B_t on formal functions (coefficients carry the jet parameter).
	NuSeries<ChartFunction> map_function(const ChartFunction &f) const;
	NuSeries<ChartFunction> map_function(const NuSeries<ChartFunction> &f) const;
	// Residual of dB_t(F)/dt = -(1/nu)[H, B_t F]_* at jet order zero.
	NuSeries<ChartFunction> ode_residual(const ChartFunction &h, const ChartFunction &f) const;
};
HamAutomorphism ham_automorphism(const WeylContextPtr &ctx, const Connection &base,
                                 const DifferentialForm &chi, const ChartFunction &h, const JetRing *ring,
                                 int tgen);

// Residual of the derivative-of-the-action identity at t = 0 applied to a:
//   d/dt|_0 (phi_t^H)^* a  =  ( i(X_H) D + D i(X_H)
//                              + (1/nu)[ -omega_{ij} y^i X_H^j
//                                        + (1/2)(nabla^2 H)_{kq} y^k y^q
//                                        - i(X_H) r, . ] ) a,
// valid through one delta of truncation (degree K-1).
WeylElement action_derivative_residual(const FedosovSetup &setup, const ChartFunction &h,
                                       const WeylElement &a, const JetRing *ring, int tgen);

} // namespace fedq
