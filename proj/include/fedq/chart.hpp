#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "fedq/jet.hpp"

namespace fedq {

enum class ChartMode { torus, affine };

// Chart descriptor: a 2m-dimensional Darboux chart, either the torus T^{2m}
// (functions are trigonometric polynomials) or an affine chart (functions are
// polynomials in the coordinates).
struct ChartSpec {
	ChartMode mode = ChartMode::torus;
	int m = 1;

	int dim() const { return 2 * m; }
	friend bool operator==(const ChartSpec &a, const ChartSpec &b) = default;
};

inline constexpr int kMaxDim = 6;

void check_chart(const ChartSpec &a, const ChartSpec &b, const char *op);

// Basis monomial, packed in 64 bits.
//   torus : kind cos/sin + integer frequency vector (canonical: first nonzero
//           frequency positive, sign absorbed into the sin coefficient;
//           cos(0) is the constant monomial, sin(0) == 0).
//   affine: exponent vector.
struct Mono {
	std::uint64_t bits = 0;

	static Mono constant() { return Mono{}; }
	static Mono affine(const std::array<int, kMaxDim> &exps, int dim);
	// Returns canonical monomial and the sign it absorbs (0 when sin(0)).
	static std::pair<Mono, int> trig(bool is_sin, std::array<int, kMaxDim> freq, int dim);

	bool is_sin() const { return (bits >> 56) == 2; }
	bool is_constant() const { return bits == 0; }
	int freq(int i) const { return static_cast<int>((bits >> (8 * i)) & 0xffu) - 128; }
	int exp(int i) const { return static_cast<int>((bits >> (8 * i)) & 0xffu); }

	friend auto operator<=>(const Mono &a, const Mono &b) = default;
};

// A finite exact function on the chart: sparse canonical sum of basis
// monomials with Scalar coefficients. Torus products are reduced eagerly to
// the canonical Fourier form, so equality is plain map equality.
class ChartFunction {
  public:
	ChartFunction() = default;
	explicit ChartFunction(const ChartSpec &chart) : chart_(chart) {}
	ChartFunction(const ChartSpec &chart, const Scalar &c);

	static ChartFunction coordinate(const ChartSpec &chart, int i); // affine only
	static ChartFunction trig(const ChartSpec &chart, bool is_sin, const std::array<int, kMaxDim> &freq);

	const ChartSpec &chart() const { return chart_; }
	bool is_zero() const { return terms_.empty(); }
	// True if every coefficient is nilpotent (value vanishes when all
	// generators are set to 0).
	bool is_nilpotent() const;
	bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Mono::constant()); }
	Scalar constant_coefficient() const;

	ChartFunction operator-() const;
	ChartFunction &operator+=(const ChartFunction &o);
	ChartFunction &operator-=(const ChartFunction &o);
	friend ChartFunction operator+(ChartFunction a, const ChartFunction &b) { return a += b; }
	friend ChartFunction operator-(ChartFunction a, const ChartFunction &b) { return a -= b; }
	friend ChartFunction operator*(const ChartFunction &a, const ChartFunction &b);
	ChartFunction &operator*=(const ChartFunction &o) { return *this = *this * o; }
	friend bool operator==(const ChartFunction &a, const ChartFunction &b);

	ChartFunction scaled(const Rat &q) const;
	ChartFunction scaled(const Scalar &s) const;

	// Exact partial derivative, 0-based coordinate index.
	ChartFunction derivative(int i) const;

	// Jet-ring passthroughs, applied coefficientwise.
	ChartFunction jet_derivative(int gen) const;
	ChartFunction jet_antiderivative(const JetRing *ring, int gen) const;
	ChartFunction jet_truncated(int gen, int max_order) const;
	ChartFunction jet_at_zero(int gen) const;
	ChartFunction jet_coefficient(int gen, int power) const;
	int jet_degree(int gen) const;

	void add_term(const Mono &mono, const Scalar &c);
	const std::map<Mono, Scalar> &terms() const { return terms_; }

	std::string str() const;

  private:
	ChartSpec chart_;
	std::map<Mono, Scalar> terms_;
};

// Exact value c * (2*pi)^p. Integrals over the torus carry the transcendental
// volume factor symbolically so the core stays rational.
struct PiScalar {
	Scalar value;
	int twopi_power = 0;

	PiScalar() = default;
	PiScalar(Scalar v, int p) : value(std::move(v)), twopi_power(p)
	{
		if (value.is_zero())
			twopi_power = 0;
	}

	bool is_zero() const { return value.is_zero(); }
	PiScalar operator-() const { return PiScalar(-value, twopi_power); }
	PiScalar &operator+=(const PiScalar &o);
	friend PiScalar operator+(PiScalar a, const PiScalar &b) { return a += b; }
	friend PiScalar operator-(PiScalar a, const PiScalar &b) { return a += -b; }
	friend PiScalar operator*(const PiScalar &a, const PiScalar &b)
	{
		return PiScalar(a.value * b.value, a.twopi_power + b.twopi_power);
	}
	friend bool operator==(const PiScalar &a, const PiScalar &b)
	{
		return a.value == b.value && (a.is_zero() || a.twopi_power == b.twopi_power);
	}
	std::string str() const;
};

} // namespace fedq
