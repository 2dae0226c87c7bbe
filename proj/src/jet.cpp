#include "fedq/jet.hpp"

#include <mutex>

namespace fedq {

namespace {
std::mutex g_ring_mutex;
std::vector<std::unique_ptr<JetRing>> &ring_pool()
{
	static std::vector<std::unique_ptr<JetRing>> pool;
	return pool;
}
} // namespace

const JetRing *JetRing::make(std::vector<Gen> gens)
{
	if (static_cast<int>(gens.size()) > kMaxGens)
		fail(errc::domain, "too many jet generators (max 8)");
	for (const auto &g : gens) {
		if (g.cap < 1 || g.cap > 200)
			fail(errc::domain, "jet generator cap out of range: " + g.name);
		if (g.name.empty())
			fail(errc::domain, "jet generator needs a name");
	}
	std::lock_guard<std::mutex> lock(g_ring_mutex);
	for (const auto &r : ring_pool()) {
		if (r->gens_.size() != gens.size())
			continue;
		bool same = true;
		for (size_t i = 0; i < gens.size(); ++i)
			if (r->gens_[i].name != gens[i].name || r->gens_[i].cap != gens[i].cap)
				same = false;
		if (same)
			return r.get();
	}
	auto ring = std::unique_ptr<JetRing>(new JetRing());
	ring->gens_ = std::move(gens);
	ring_pool().push_back(std::move(ring));
	return ring_pool().back().get();
}

int JetRing::index(const std::string &name) const
{
	for (int i = 0; i < size(); ++i)
		if (gens_[static_cast<size_t>(i)].name == name)
			return i;
	return -1;
}

Scalar::Scalar(const Rat &q)
{
	if (!fedq::is_zero(q))
		terms_.emplace(0, q);
}

std::uint64_t Scalar::with_exp(std::uint64_t key, int i, int e)
{
	key &= ~(std::uint64_t(0xff) << (8 * i));
	key |= std::uint64_t(static_cast<unsigned>(e)) << (8 * i);
	return key;
}

Scalar Scalar::generator(const JetRing *ring, int index, int power)
{
	if (ring == nullptr || index < 0 || index >= ring->size())
		fail(errc::domain, "bad jet generator index");
	Scalar s;
	s.ring_ = ring;
	if (power < 0)
		fail(errc::domain, "negative generator power");
	if (power <= ring->gen(index).cap)
		s.terms_.emplace(with_exp(0, index, power), Rat(1));
	return s;
}

bool Scalar::is_nilpotent() const
{
	return terms_.find(0) == terms_.end();
}

Rat Scalar::constant_part() const
{
	auto it = terms_.find(0);
	return it == terms_.end() ? Rat(0) : it->second;
}

const JetRing *Scalar::merged_ring(const Scalar &o, const char *op) const
{
	if (ring_ == nullptr)
		return o.ring_;
	if (o.ring_ == nullptr || o.ring_ == ring_)
		return ring_;
	fail(errc::mismatch, std::string("jet ring mismatch in ") + op);
}

void Scalar::add_term(std::uint64_t key, const Rat &c)
{
	auto [it, inserted] = terms_.try_emplace(key, c);
	if (!inserted) {
		it->second += c;
		if (fedq::is_zero(it->second))
			terms_.erase(it);
	}
}

Scalar Scalar::operator-() const
{
	Scalar r = *this;
	for (auto &t : r.terms_)
		t.second = -t.second;
	return r;
}

Scalar &Scalar::operator+=(const Scalar &o)
{
	ring_ = merged_ring(o, "+");
	for (const auto &t : o.terms_)
		add_term(t.first, t.second);
	return *this;
}

Scalar &Scalar::operator-=(const Scalar &o)
{
	ring_ = merged_ring(o, "-");
	for (const auto &t : o.terms_)
		add_term(t.first, -t.second);
	return *this;
}

Scalar operator*(const Scalar &a, const Scalar &b)
{
	Scalar r;
	r.ring_ = a.merged_ring(b, "*");
	const int n = r.ring_ ? r.ring_->size() : 0;
	for (const auto &ta : a.terms_) {
		for (const auto &tb : b.terms_) {
			std::uint64_t key = 0;
			bool dead = false;
			for (int i = 0; i < n; ++i) {
				int e = Scalar::exp_of(ta.first, i) + Scalar::exp_of(tb.first, i);
				if (e > r.ring_->gen(i).cap) {
					dead = true;
					break;
				}
				key = Scalar::with_exp(key, i, e);
			}
			if (!dead)
				r.add_term(key, ta.second * tb.second);
		}
	}
	return r;
}

Scalar Scalar::scaled(const Rat &q) const
{
	if (fedq::is_zero(q))
		return Scalar();
	Scalar r = *this;
	for (auto &t : r.terms_)
		t.second *= q;
	return r;
}

Scalar Scalar::derivative(int index) const
{
	Scalar r;
	r.ring_ = ring_;
	for (const auto &t : terms_) {
		int e = exp_of(t.first, index);
		if (e > 0)
			r.add_term(with_exp(t.first, index, e - 1), t.second * e);
	}
	return r;
}

Scalar Scalar::antiderivative(const JetRing *ring, int index) const
{
	if (ring_ != nullptr && ring_ != ring)
		fail(errc::mismatch, "jet ring mismatch in antiderivative");
	Scalar r;
	r.ring_ = ring;
	for (const auto &t : terms_) {
		int e = exp_of(t.first, index);
		if (e + 1 <= ring->gen(index).cap)
			r.add_term(with_exp(t.first, index, e + 1), t.second / (e + 1));
	}
	return r;
}

Scalar Scalar::jet_truncated(int index, int max_order) const
{
	Scalar r;
	r.ring_ = ring_;
	for (const auto &t : terms_)
		if (exp_of(t.first, index) <= max_order)
			r.add_term(t.first, t.second);
	return r;
}

Scalar Scalar::at_zero(int index) const
{
	Scalar r;
	r.ring_ = ring_;
	for (const auto &t : terms_)
		if (exp_of(t.first, index) == 0)
			r.add_term(t.first, t.second);
	return r;
}

Scalar Scalar::coefficient(int index, int power) const
{
	Scalar r;
	r.ring_ = ring_;
	for (const auto &t : terms_)
		if (exp_of(t.first, index) == power)
			r.add_term(with_exp(t.first, index, 0), t.second);
	return r;
}

int Scalar::degree(int index) const
{
	int d = 0;
	for (const auto &t : terms_)
		d = std::max(d, exp_of(t.first, index));
	return d;
}

Scalar Scalar::inverse() const
{
	Rat c = constant_part();
	if (fedq::is_zero(c))
		fail(errc::domain, "Scalar::inverse of a non-unit");
	// s = c(1 + n) with n nilpotent; s^-1 = c^-1 sum (-n)^k.
	Scalar n = (*this - Scalar(c)).scaled(1 / c);
	Scalar r(Rat(1)), pw(Rat(1));
	while (true) {
		pw = pw * n;
		if (pw.is_zero())
			break;
		pw = -pw;
		r += pw;
	}
	return r.scaled(1 / c);
}

std::string Scalar::str() const
{
	if (terms_.empty())
		return "0";
	std::string out;
	const int n = ring_ ? ring_->size() : 0;
	bool first = true;
	for (const auto &t : terms_) {
		std::string mono;
		for (int i = 0; i < n; ++i) {
			int e = exp_of(t.first, i);
			if (e == 0)
				continue;
			if (!mono.empty())
				mono += "*";
			mono += ring_->gen(i).name;
			if (e > 1)
				mono += "^" + std::to_string(e);
		}
		Rat c = t.second;
		bool neg = sgn(c) < 0;
		if (neg)
			c = -c;
		if (first)
			out += neg ? "-" : "";
		else
			out += neg ? " - " : " + ";
		first = false;
		std::string cs = to_string(c);
		if (mono.empty())
			out += cs;
		else if (cs == "1")
			out += mono;
		else
			out += cs + "*" + mono;
	}
	return out;
}

} // namespace fedq
