#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fedq/rational.hpp"

namespace fedq {

// A finite set of nilpotent generators adjoined to the rationals. Generator i
// has a truncation cap: monomials with exponent > cap vanish identically, so
// each generator g satisfies g^(cap+1) = 0. Rings are interned; identity of
// the pointer is identity of the ring.
class JetRing {
  public:
	struct Gen {
		std::string name;
		int cap; // highest surviving power, >= 1
	};

	static const JetRing *make(std::vector<Gen> gens);

	int size() const { return static_cast<int>(gens_.size()); }
	const Gen &gen(int i) const { return gens_[static_cast<size_t>(i)]; }
	// Index of a generator by name, -1 if absent.
	int index(const std::string &name) const;

	static constexpr int kMaxGens = 8;

  private:
	JetRing() = default;
	std::vector<Gen> gens_;
};

// Element of Q extended by the nilpotent generators of a JetRing: a finite
// sum of rational coefficients times generator monomials below truncation.
// ring() == nullptr means a plain rational; such values mix freely with any
// ring. Values are immutable in spirit: all operations return new Scalars.
class Scalar {
  public:
	Scalar() = default;
	Scalar(long n) : Scalar(Rat(n)) {} // NOLINT: implicit by design
	Scalar(const Rat &q);              // NOLINT: implicit by design
	static Scalar generator(const JetRing *ring, int index, int power = 1);

	const JetRing *ring() const { return ring_; }
	bool is_zero() const { return terms_.empty(); }
	// True if every term has at least one generator factor (so the value is
	// nilpotent and 1 + this is invertible).
	bool is_nilpotent() const;
	bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
	// Coefficient of the generator-free monomial.
	Rat constant_part() const;

	Scalar operator-() const;
	Scalar &operator+=(const Scalar &o);
	Scalar &operator-=(const Scalar &o);
	friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
	friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
	friend Scalar operator*(const Scalar &a, const Scalar &b);
	Scalar &operator*=(const Scalar &o) { return *this = *this * o; }
	friend bool operator==(const Scalar &a, const Scalar &b) { return a.terms_ == b.terms_; }

	Scalar scaled(const Rat &q) const;

	// d/dg: formal derivative with respect to generator `index`.
	Scalar derivative(int index) const;
	// Antiderivative in generator `index` with zero constant term; powers
	// beyond the cap are dropped (jet semantics). The ring must be supplied
	// so plain rationals integrate to ring elements.
	Scalar antiderivative(const JetRing *ring, int index) const;
	// Drop terms with generator power above max_order.
	Scalar jet_truncated(int index, int max_order) const;
	// Substitute generator `index` := 0.
	Scalar at_zero(int index) const;
	// Coefficient of gen^power as a Scalar without that generator factor.
	Scalar coefficient(int index, int power) const;
	// Highest power of generator `index` present.
	int degree(int index) const;
	// Multiplicative inverse; requires constant_part() != 0.
	Scalar inverse() const;

	std::string str() const;

	// Deterministic iteration for serialization and hashing by callers.
	const std::map<std::uint64_t, Rat> &terms() const { return terms_; }

  private:
	static int exp_of(std::uint64_t key, int i) { return static_cast<int>((key >> (8 * i)) & 0xffu); }
	static std::uint64_t with_exp(std::uint64_t key, int i, int e);
	const JetRing *merged_ring(const Scalar &o, const char *op) const;
	void add_term(std::uint64_t key, const Rat &c);

	const JetRing *ring_ = nullptr;
	std::map<std::uint64_t, Rat> terms_; // key packs one exponent byte per generator
};

} // namespace fedq
