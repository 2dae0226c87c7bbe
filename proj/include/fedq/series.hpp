#pragma once

#include <map>

#include "fedq/error.hpp"
#include "fedq/rational.hpp"

namespace fedq {

// Cap value used for series known exactly at every order (finite data).
inline constexpr int kExactOrder = 1 << 20;

// Truncated formal Laurent series in the deformation parameter nu. `cap` is
// the highest order whose coefficient is known; coefficients beyond it are
// dropped. `floor` is a structural lower bound on the order (finitely many
// negative powers, the formal Laurent discipline). T is any exact coefficient
// type with +, -, is_zero and equality.
template <class T> class NuSeries {
  public:
	NuSeries() = default;
	explicit NuSeries(int cap, int floor = 0) : cap_(cap), floor_(floor) {}

	static NuSeries constant(T value, int cap, int floor = 0)
	{
		NuSeries s(cap, floor);
		s.set(0, std::move(value));
		return s;
	}

	int cap() const { return cap_; }
	int floor() const { return floor_; }
	bool is_zero() const { return c_.empty(); }

	void set(int k, T value)
	{
		if (k < floor_)
			fail(errc::domain, "nu power below series floor");
		if (k > cap_)
			return;
		if (value.is_zero())
			c_.erase(k);
		else
			c_.insert_or_assign(k, std::move(value));
	}

	// Coefficient of nu^k; default-constructed T when absent.
	T coeff(int k) const
	{
		auto it = c_.find(k);
		return it == c_.end() ? T() : it->second;
	}
	bool has(int k) const { return c_.find(k) != c_.end(); }
	int lowest() const { return c_.empty() ? cap_ + 1 : c_.begin()->first; }

	NuSeries operator-() const
	{
		NuSeries r(cap_, floor_);
		for (const auto &t : c_)
			r.c_.emplace(t.first, -t.second);
		return r;
	}
	NuSeries &operator+=(const NuSeries &o)
	{
		cap_ = std::min(cap_, o.cap_);
		floor_ = std::min(floor_, o.floor_);
		for (const auto &t : o.c_) {
			if (t.first > cap_)
				break;
			add(t.first, t.second);
		}
		trim();
		return *this;
	}
	NuSeries &operator-=(const NuSeries &o) { return *this += -o; }
	friend NuSeries operator+(NuSeries a, const NuSeries &b) { return a += b; }
	friend NuSeries operator-(NuSeries a, const NuSeries &b) { return a -= b; }

	friend NuSeries operator*(const NuSeries &a, const NuSeries &b)
	{
		int cap = std::min({kExactOrder, a.cap_ == kExactOrder ? kExactOrder : a.cap_ + b.floor_,
		                    b.cap_ == kExactOrder ? kExactOrder : b.cap_ + a.floor_});
		NuSeries r(cap, a.floor_ + b.floor_);
		for (const auto &ta : a.c_)
			for (const auto &tb : b.c_) {
				if (ta.first + tb.first > cap)
					continue;
				r.add(ta.first + tb.first, ta.second * tb.second);
			}
		r.trim();
		return r;
	}

	friend bool operator==(const NuSeries &a, const NuSeries &b)
	{
		int upto = std::min(a.cap_, b.cap_);
		for (int k = std::min(a.floor_, b.floor_); k <= upto; ++k)
			if (!(a.coeff(k) == b.coeff(k)))
				return false;
		return true;
	}

	// Multiply by nu^k (k may be negative; floor shifts with it).
	NuSeries shifted(int k) const
	{
		NuSeries r(cap_ == kExactOrder ? kExactOrder : cap_ + k, floor_ + k);
		for (const auto &t : c_)
			r.c_.emplace(t.first + k, t.second);
		return r;
	}

	NuSeries truncated(int cap) const
	{
		NuSeries r(std::min(cap, cap_), floor_);
		for (const auto &t : c_) {
			if (t.first > r.cap_)
				break;
			r.c_.emplace(t.first, t.second);
		}
		return r;
	}

	template <class F> auto transform(F &&fn) const
	{
		using U = decltype(fn(std::declval<const T &>()));
		NuSeries<U> r(cap_, floor_);
		for (const auto &t : c_)
			r.set(t.first, fn(t.second));
		return r;
	}

	const std::map<int, T> &coefficients() const { return c_; }

  private:
	void add(int k, const T &v)
	{
		auto [it, inserted] = c_.try_emplace(k, v);
		if (!inserted)
			it->second += v;
	}
	void trim()
	{
		for (auto it = c_.begin(); it != c_.end();) {
			if (it->second.is_zero() || it->first > cap_)
				it = c_.erase(it);
			else
				++it;
		}
	}

	int cap_ = kExactOrder;
	int floor_ = 0;
	std::map<int, T> c_;
};

} // namespace fedq
