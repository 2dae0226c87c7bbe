#include "fedq/geometry.hpp"

#include <algorithm>

#include "fedq/error.hpp"

namespace fedq {

VectorField::VectorField(const ChartSpec &chart, std::vector<ChartFunction> comps)
    : chart_(chart), comps_(std::move(comps))
{
	if (static_cast<int>(comps_.size()) != chart.dim())
		fail(errc::mismatch, "vector field needs one component per coordinate");
	for (auto &c : comps_)
		if (!c.is_zero())
			check_chart(chart_, c.chart(), "vector field component");
		else
			c = ChartFunction(chart_);
}

VectorField VectorField::zero(const ChartSpec &chart)
{
	return VectorField(chart, std::vector<ChartFunction>(static_cast<size_t>(chart.dim()), ChartFunction(chart)));
}

VectorField VectorField::coordinate(const ChartSpec &chart, int k)
{
	VectorField y = zero(chart);
	y.comps_[static_cast<size_t>(k)] = ChartFunction(chart, Scalar(Rat(1)));
	return y;
}

bool VectorField::is_zero() const
{
	return std::all_of(comps_.begin(), comps_.end(), [](const ChartFunction &c) { return c.is_zero(); });
}

VectorField VectorField::operator-() const
{
	VectorField r = *this;
	for (auto &c : r.comps_)
		c = -c;
	return r;
}

VectorField operator+(const VectorField &a, const VectorField &b)
{
	check_chart(a.chart_, b.chart_, "vector field +");
	VectorField r = a;
	for (int k = 0; k < a.chart_.dim(); ++k)
		r.comps_[static_cast<size_t>(k)] += b.comps_[static_cast<size_t>(k)];
	return r;
}

VectorField operator-(const VectorField &a, const VectorField &b) { return a + (-b); }

bool operator==(const VectorField &a, const VectorField &b)
{
	return a.chart_ == b.chart_ && a.comps_ == b.comps_;
}

VectorField VectorField::scaled(const Rat &q) const
{
	VectorField r = *this;
	for (auto &c : r.comps_)
		c = c.scaled(q);
	return r;
}

VectorField VectorField::scaled(const Scalar &s) const
{
	VectorField r = *this;
	for (auto &c : r.comps_)
		c = c.scaled(s);
	return r;
}

ChartFunction VectorField::apply(const ChartFunction &f) const
{
	ChartFunction r(chart_);
	for (int k = 0; k < chart_.dim(); ++k)
		r += comps_[static_cast<size_t>(k)] * f.derivative(k);
	return r;
}

void SymTensor3::set(int i, int j, int l, const ChartFunction &c)
{
	std::array<int, 3> key{i, j, l};
	std::sort(key.begin(), key.end());
	if (key[0] < 0 || key[2] >= chart_.dim())
		fail(errc::domain, "tensor index out of range");
	if (c.is_zero())
		entries_.erase(key);
	else
		entries_.insert_or_assign(key, c);
}

ChartFunction SymTensor3::get(int i, int j, int l) const
{
	std::array<int, 3> key{i, j, l};
	std::sort(key.begin(), key.end());
	auto it = entries_.find(key);
	return it == entries_.end() ? ChartFunction(chart_) : it->second;
}

int Connection::idx(int k, int i, int j) const
{
	const int d = chart_.dim();
	return (k * d + i) * d + j;
}

Connection Connection::flat(const ChartSpec &chart)
{
	Connection c;
	c.chart_ = chart;
	const int d = chart.dim();
	c.gamma_.assign(static_cast<size_t>(d * d * d), ChartFunction(chart));
	c.symplectic_ = true;
	return c;
}

namespace {

bool total_symmetry_check(const ChartSpec &chart, const std::vector<ChartFunction> &gamma)
{
	const int d = chart.dim();
	auto g = [&](int k, int i, int j) -> const ChartFunction & {
		return gamma[static_cast<size_t>((k * d + i) * d + j)];
	};
	// T_{lij} = omega_{lk} Gamma^k_{ij}; symmetric in (i,j) already, so total
	// symmetry follows from T_{lij} = T_{ilj}.
	auto t = [&](int l, int i, int j) {
		ChartFunction s(chart);
		for (int k = 0; k < d; ++k) {
			int w = omega_entry(chart, l, k);
			if (w == 0)
				continue;
			s += w == 1 ? g(k, i, j) : -g(k, i, j);
		}
		return s;
	};
	for (int l = 0; l < d; ++l)
		for (int i = 0; i < l; ++i)
			for (int j = 0; j < d; ++j)
				if (!(t(l, i, j) == t(i, l, j)))
					return false;
	return true;
}

} // namespace

Connection Connection::from_christoffels(const ChartSpec &chart, std::vector<ChartFunction> gamma)
{
	const int d = chart.dim();
	if (static_cast<int>(gamma.size()) != d * d * d)
		fail(errc::mismatch, "christoffel data has wrong size");
	Connection c;
	c.chart_ = chart;
	c.gamma_ = std::move(gamma);
	for (auto &g : c.gamma_)
		if (g.is_zero())
			g = ChartFunction(chart);
	for (int k = 0; k < d; ++k)
		for (int i = 0; i < d; ++i)
			for (int j = 0; j < i; ++j)
				if (!(c.gamma_[static_cast<size_t>(c.idx(k, i, j))] == c.gamma_[static_cast<size_t>(c.idx(k, j, i))]))
					fail(errc::precondition, "christoffel symbols must be symmetric in the lower indices");
	c.symplectic_ = total_symmetry_check(chart, c.gamma_);
	return c;
}

Connection Connection::with_potential(const Connection &base, const SymTensor3 &s)
{
	const ChartSpec chart = base.chart();
	const int d = chart.dim();
	std::vector<ChartFunction> gamma = base.gamma_;
	// omega_{lk} Delta^k_{ij} = S_{lij}  =>  Delta^k_{ij} = Lambda^{kl} S_{lij}
	for (int k = 0; k < d; ++k)
		for (int i = 0; i < d; ++i)
			for (int j = 0; j < d; ++j) {
				ChartFunction delta(chart);
				for (int l = 0; l < d; ++l) {
					int lam = lambda_entry(chart, k, l);
					if (lam == 0)
						continue;
					ChartFunction e = s.get(l, i, j);
					delta += lam == 1 ? e : -e;
				}
				gamma[static_cast<size_t>((k * d + i) * d + j)] += delta;
			}
	return from_christoffels(chart, std::move(gamma));
}

const ChartFunction &Connection::gamma(int k, int i, int j) const
{
	return gamma_[static_cast<size_t>(idx(k, i, j))];
}

bool operator==(const Connection &a, const Connection &b)
{
	return a.chart_ == b.chart_ && a.gamma_ == b.gamma_;
}

Connection interpolate(const Connection &a, const Connection &b, const Scalar &t)
{
	check_chart(a.chart(), b.chart(), "connection path");
	std::vector<ChartFunction> gamma = a.gamma_;
	for (size_t i = 0; i < gamma.size(); ++i)
		gamma[i] += (b.gamma_[i] - a.gamma_[i]).scaled(t);
	return Connection::from_christoffels(a.chart(), std::move(gamma));
}

std::vector<ChartFunction> Connection::difference(const Connection &base) const
{
	check_chart(chart_, base.chart_, "connection difference");
	std::vector<ChartFunction> a = gamma_;
	for (size_t i = 0; i < a.size(); ++i)
		a[i] -= base.gamma_[i];
	return a;
}

Connection Connection::jet_at_zero(int gen) const
{
	std::vector<ChartFunction> gamma = gamma_;
	for (auto &g : gamma)
		g = g.jet_at_zero(gen);
	return from_christoffels(chart_, std::move(gamma));
}

Connection Connection::jet_derivative(int gen) const
{
	std::vector<ChartFunction> gamma = gamma_;
	for (auto &g : gamma)
		g = g.jet_derivative(gen);
	// Plain derivative data; torsion-free but not a connection itself. Reuse
	// the container without the symplectic claim.
	Connection c;
	c.chart_ = chart_;
	c.gamma_ = std::move(gamma);
	c.symplectic_ = false;
	return c;
}

namespace {

// H o (id + u), valid whenever every u^k is nilpotent.
ChartFunction compose_displaced(const ChartFunction &h, const std::vector<ChartFunction> &u)
{
	const ChartSpec chart = h.chart();
	const int d = chart.dim();
	ChartFunction out(chart);
	for (const auto &term : h.terms()) {
		if (term.first.is_constant()) {
			out.add_term(term.first, term.second);
			continue;
		}
		if (chart.mode == ChartMode::torus) {
			// cos(k.x + s), sin(k.x + s) with s = sum k_i u^i nilpotent.
			ChartFunction s(chart);
			std::array<int, kMaxDim> freq{};
			for (int i = 0; i < d; ++i) {
				int k = term.first.freq(i);
				freq[static_cast<size_t>(i)] = k;
				if (k != 0)
					s += u[static_cast<size_t>(i)].scaled(Rat(k));
			}
			ChartFunction cos_s(chart, Scalar(Rat(1)));
			ChartFunction sin_s(chart);
			ChartFunction pw(chart, Scalar(Rat(1)));
			Rat fact = 1;
			for (int n = 1;; ++n) {
				pw = pw * s;
				if (pw.is_zero())
					break;
				fact *= n;
				Rat w = 1 / fact;
				if (n % 4 == 1)
					sin_s += pw.scaled(w);
				else if (n % 4 == 2)
					cos_s -= pw.scaled(w);
				else if (n % 4 == 3)
					sin_s -= pw.scaled(w);
				else
					cos_s += pw.scaled(w);
			}
			ChartFunction base_cos = ChartFunction::trig(chart, false, freq);
			ChartFunction base_sin = ChartFunction::trig(chart, true, freq);
			ChartFunction value = term.first.is_sin() ? base_sin * cos_s + base_cos * sin_s
			                                          : base_cos * cos_s - base_sin * sin_s;
			out += value.scaled(term.second);
		} else {
			ChartFunction value(chart, Scalar(Rat(1)));
			for (int i = 0; i < d; ++i) {
				int e = term.first.exp(i);
				if (e == 0)
					continue;
				// (x_i + u_i)^e, binomial expansion with nilpotent u_i
				ChartFunction xi = ChartFunction::coordinate(chart, i);
				ChartFunction acc(chart);
				ChartFunction upow(chart, Scalar(Rat(1)));
				Rat binom = 1;
				for (int j = 0; j <= e; ++j) {
					if (j > 0) {
						upow = upow * u[static_cast<size_t>(i)];
						if (upow.is_zero())
							break;
						binom = binom * (e - j + 1) / j;
					}
					ChartFunction xpow(chart, Scalar(Rat(1)));
					for (int p = 0; p < e - j; ++p)
						xpow = xpow * xi;
					acc += (xpow * upow).scaled(binom);
				}
				value = value * acc;
			}
			out += value.scaled(term.second);
		}
	}
	return out;
}

} // namespace

DiffeoFamily DiffeoFamily::identity(const ChartSpec &chart)
{
	return from_displacement(chart, std::vector<ChartFunction>(static_cast<size_t>(chart.dim()), ChartFunction(chart)));
}

DiffeoFamily DiffeoFamily::from_displacement(const ChartSpec &chart, std::vector<ChartFunction> u)
{
	const int d = chart.dim();
	if (static_cast<int>(u.size()) != d)
		fail(errc::mismatch, "displacement needs one component per coordinate");
	for (auto &c : u) {
		if (c.is_zero()) {
			c = ChartFunction(chart);
			continue;
		}
		check_chart(chart, c.chart(), "displacement");
		if (!c.is_nilpotent())
			fail(errc::precondition, "diffeo family must be the identity at vanishing jet parameters");
	}
	DiffeoFamily f;
	f.chart_ = chart;
	f.u_ = std::move(u);

	// Inverse displacement: v = -u o (id + v), iterated to the fixed point.
	std::vector<ChartFunction> v(static_cast<size_t>(d), ChartFunction(chart));
	for (int guard = 0;; ++guard) {
		std::vector<ChartFunction> next(static_cast<size_t>(d), ChartFunction(chart));
		bool changed = false;
		for (int k = 0; k < d; ++k) {
			next[static_cast<size_t>(k)] = -compose_displaced(f.u_[static_cast<size_t>(k)], v);
			if (!(next[static_cast<size_t>(k)] == v[static_cast<size_t>(k)]))
				changed = true;
		}
		v = std::move(next);
		if (!changed)
			break;
		if (guard > 64)
			fail(errc::internal, "diffeo inversion failed to close");
	}
	f.inv_u_ = std::move(v);

	// Jacobian and its inverse (Neumann series; the offset is nilpotent).
	f.jac_.assign(static_cast<size_t>(d * d), ChartFunction(chart));
	for (int k = 0; k < d; ++k)
		for (int i = 0; i < d; ++i) {
			ChartFunction e = f.u_[static_cast<size_t>(k)].derivative(i);
			if (k == i)
				e += ChartFunction(chart, Scalar(Rat(1)));
			f.jac_[static_cast<size_t>(k * d + i)] = e;
		}
	std::vector<ChartFunction> dmat(static_cast<size_t>(d * d), ChartFunction(chart));
	for (int k = 0; k < d; ++k)
		for (int i = 0; i < d; ++i) {
			dmat[static_cast<size_t>(k * d + i)] = f.u_[static_cast<size_t>(k)].derivative(i);
		}
	std::vector<ChartFunction> inv(static_cast<size_t>(d * d), ChartFunction(chart));
	std::vector<ChartFunction> pw(static_cast<size_t>(d * d), ChartFunction(chart));
	for (int k = 0; k < d; ++k) {
		inv[static_cast<size_t>(k * d + k)] = ChartFunction(chart, Scalar(Rat(1)));
		pw[static_cast<size_t>(k * d + k)] = ChartFunction(chart, Scalar(Rat(1)));
	}
	while (true) {
		// pw <- -pw * dmat
		std::vector<ChartFunction> nx(static_cast<size_t>(d * d), ChartFunction(chart));
		bool nonzero = false;
		for (int k = 0; k < d; ++k)
			for (int i = 0; i < d; ++i) {
				ChartFunction s(chart);
				for (int l = 0; l < d; ++l)
					s += pw[static_cast<size_t>(k * d + l)] * dmat[static_cast<size_t>(l * d + i)];
				nx[static_cast<size_t>(k * d + i)] = -s;
				if (!s.is_zero())
					nonzero = true;
			}
		if (!nonzero)
			break;
		pw = std::move(nx);
		for (int e = 0; e < d * d; ++e)
			inv[static_cast<size_t>(e)] += pw[static_cast<size_t>(e)];
	}
	f.inv_jac_ = std::move(inv);
	return f;
}

DiffeoFamily DiffeoFamily::flow_jet(const VectorField &y, const JetRing *ring, int gen, int order)
{
	if (order < 1 || order > ring->gen(gen).cap)
		fail(errc::domain, "flow jet order must be within the generator cap");
	const ChartSpec chart = y.chart();
	Scalar t = Scalar::generator(ring, gen);
	std::vector<ChartFunction> u(static_cast<size_t>(chart.dim()), ChartFunction(chart));
	for (int k = 0; k < chart.dim(); ++k) {
		u[static_cast<size_t>(k)] = y.comp(k).scaled(t);
		if (order >= 2) {
			// second order term: (t^2/2) Y^j d_j Y^k
			ChartFunction acc(chart);
			for (int j = 0; j < chart.dim(); ++j)
				acc += y.comp(j) * y.comp(k).derivative(j);
			u[static_cast<size_t>(k)] += acc.scaled(t * t).scaled(rat(1, 2));
		}
	}
	return from_displacement(chart, std::move(u));
}

bool DiffeoFamily::is_identity() const
{
	return std::all_of(u_.begin(), u_.end(), [](const ChartFunction &c) { return c.is_zero(); });
}

DiffeoFamily DiffeoFamily::inverted() const { return from_displacement(chart_, inv_u_); }

DiffeoFamily compose(const DiffeoFamily &a, const DiffeoFamily &b)
{
	check_chart(a.chart(), b.chart(), "diffeo composition");
	const int d = a.chart().dim();
	std::vector<ChartFunction> u(static_cast<size_t>(d));
	for (int k = 0; k < d; ++k)
		u[static_cast<size_t>(k)] = b.u_[static_cast<size_t>(k)] +
		                            compose_displaced(a.u_[static_cast<size_t>(k)], b.u_);
	return DiffeoFamily::from_displacement(a.chart(), std::move(u));
}

DiffeoFamily DiffeoFamily::jet_at_zero(int gen) const
{
	std::vector<ChartFunction> u = u_;
	for (auto &c : u)
		c = c.jet_at_zero(gen);
	return from_displacement(chart_, std::move(u));
}

ChartFunction compose(const ChartFunction &h, const DiffeoFamily &f)
{
	if (h.is_zero())
		return h;
	check_chart(h.chart(), f.chart(), "composition");
	return compose_displaced(h, f.displacement());
}

ChartFunction pullback(const ChartFunction &h, const DiffeoFamily &f) { return compose(h, f); }

DifferentialForm pullback(const DifferentialForm &theta, const DiffeoFamily &f)
{
	const ChartSpec chart = theta.chart();
	const int d = chart.dim();
	DifferentialForm out(chart, theta.degree());
	for (const auto &t : theta.components()) {
		DifferentialForm piece = DifferentialForm::from_function(compose(t.second, f));
		for (int j = 0; j < d; ++j) {
			if (!(t.first & (1u << j)))
				continue;
			// df^j = J^j_i dx^i
			DifferentialForm dfj(chart, 1);
			for (int i = 0; i < d; ++i)
				dfj += DifferentialForm::monomial(f.jacobian(j, i), {i});
			piece = wedge(piece, dfj);
		}
		out += piece;
	}
	return out;
}

VectorField pushforward(const VectorField &y, const DiffeoFamily &f)
{
	check_chart(y.chart(), f.chart(), "pushforward");
	const int d = y.chart().dim();
	DiffeoFamily finv = f.inverted();
	std::vector<ChartFunction> comps(static_cast<size_t>(d));
	for (int k = 0; k < d; ++k) {
		ChartFunction w(y.chart());
		for (int i = 0; i < d; ++i)
			w += f.jacobian(k, i) * y.comp(i);
		comps[static_cast<size_t>(k)] = compose(w, finv);
	}
	return VectorField(y.chart(), std::move(comps));
}

VectorField pullback(const VectorField &y, const DiffeoFamily &f) { return pushforward(y, f.inverted()); }

VectorField hamiltonian_vf(const ChartFunction &h)
{
	const ChartSpec chart = h.chart();
	const int d = chart.dim();
	std::vector<ChartFunction> comps(static_cast<size_t>(d), ChartFunction(chart));
	// X^i omega_{ij} = d_j H  =>  X^i = d_j H Lambda^{ji}
	for (int i = 0; i < d; ++i)
		for (int j = 0; j < d; ++j) {
			int lam = lambda_entry(chart, j, i);
			if (lam == 0)
				continue;
			ChartFunction t = h.derivative(j);
			comps[static_cast<size_t>(i)] += lam == 1 ? t : -t;
		}
	return VectorField(chart, std::move(comps));
}

VectorField lie_bracket(const VectorField &y, const VectorField &z)
{
	check_chart(y.chart(), z.chart(), "lie bracket");
	const int d = y.chart().dim();
	std::vector<ChartFunction> comps(static_cast<size_t>(d), ChartFunction(y.chart()));
	for (int k = 0; k < d; ++k)
		for (int j = 0; j < d; ++j)
			comps[static_cast<size_t>(k)] +=
			    y.comp(j) * z.comp(k).derivative(j) - z.comp(j) * y.comp(k).derivative(j);
	return VectorField(y.chart(), std::move(comps));
}

ChartFunction evaluate_2form(const DifferentialForm &chi, const VectorField &y, const VectorField &z)
{
	if (chi.degree() != 2)
		fail(errc::domain, "evaluate_2form needs a 2-form");
	ChartFunction r(chi.chart());
	for (const auto &t : chi.components()) {
		int i = -1, j = -1;
		for (int b = 0; b < 8; ++b)
			if (t.first & (1u << b)) {
				if (i < 0)
					i = b;
				else
					j = b;
			}
		r += t.second * (y.comp(i) * z.comp(j) - y.comp(j) * z.comp(i));
	}
	return r;
}

std::vector<ChartFunction> n_tensor(const Connection &conn)
{
	const ChartSpec chart = conn.chart();
	const int d = chart.dim();
	std::vector<ChartFunction> n(static_cast<size_t>(d * d * d), ChartFunction(chart));
	for (int i = 0; i < d; ++i)
		for (int j = 0; j < d; ++j) {
			// R_l = (nabla_{e_i} omega)(e_j, e_l)
			std::vector<ChartFunction> rl(static_cast<size_t>(d), ChartFunction(chart));
			for (int l = 0; l < d; ++l)
				for (int p = 0; p < d; ++p) {
					int w1 = omega_entry(chart, p, l);
					if (w1 != 0)
						rl[static_cast<size_t>(l)] -= w1 == 1 ? conn.gamma(p, i, j) : -conn.gamma(p, i, j);
					int w2 = omega_entry(chart, j, p);
					if (w2 != 0)
						rl[static_cast<size_t>(l)] -= w2 == 1 ? conn.gamma(p, i, l) : -conn.gamma(p, i, l);
				}
			// N^k = R_l Lambda^{lk}
			for (int k = 0; k < d; ++k) {
				ChartFunction acc(chart);
				for (int l = 0; l < d; ++l) {
					int lam = lambda_entry(chart, l, k);
					if (lam == 0)
						continue;
					acc += lam == 1 ? rl[static_cast<size_t>(l)] : -rl[static_cast<size_t>(l)];
				}
				n[static_cast<size_t>((k * d + i) * d + j)] = std::move(acc);
			}
		}
	return n;
}

Connection n_symmetrize(const Connection &conn)
{
	const ChartSpec chart = conn.chart();
	const int d = chart.dim();
	std::vector<ChartFunction> n = n_tensor(conn);
	std::vector<ChartFunction> gamma(static_cast<size_t>(d * d * d), ChartFunction(chart));
	Rat third = rat(1, 3);
	for (int k = 0; k < d; ++k)
		for (int i = 0; i < d; ++i)
			for (int j = 0; j < d; ++j) {
				ChartFunction g = conn.gamma(k, i, j);
				g += n[static_cast<size_t>((k * d + i) * d + j)].scaled(third);
				g += n[static_cast<size_t>((k * d + j) * d + i)].scaled(third);
				gamma[static_cast<size_t>((k * d + i) * d + j)] = std::move(g);
			}
	Connection out = Connection::from_christoffels(chart, std::move(gamma));
	if (!out.is_symplectic())
		fail(errc::internal, "n_symmetrize failed to produce a symplectic connection");
	return out;
}

Connection pullback_connection(const DiffeoFamily &f, const Connection &conn)
{
	const ChartSpec chart = conn.chart();
	check_chart(chart, f.chart(), "pullback connection");
	const int d = chart.dim();
	if (f.is_identity())
		return conn;
	// Gamma'^k_{ij} = (J^{-1})^k_l [ d_i d_j u^l + (Gamma^l_{pq} o f) J^p_i J^q_j ]
	std::vector<ChartFunction> composed(static_cast<size_t>(d * d * d));
	for (int l = 0; l < d; ++l)
		for (int p = 0; p < d; ++p)
			for (int q = 0; q < d; ++q)
				composed[static_cast<size_t>((l * d + p) * d + q)] = compose(conn.gamma(l, p, q), f);
	std::vector<ChartFunction> gamma(static_cast<size_t>(d * d * d), ChartFunction(chart));
	for (int i = 0; i < d; ++i)
		for (int j = i; j < d; ++j) {
			std::vector<ChartFunction> bracket(static_cast<size_t>(d), ChartFunction(chart));
			for (int l = 0; l < d; ++l) {
				ChartFunction acc = f.displacement()[static_cast<size_t>(l)].derivative(i).derivative(j);
				for (int p = 0; p < d; ++p)
					for (int q = 0; q < d; ++q) {
						const ChartFunction &g = composed[static_cast<size_t>((l * d + p) * d + q)];
						if (g.is_zero())
							continue;
						acc += g * f.jacobian(p, i) * f.jacobian(q, j);
					}
				bracket[static_cast<size_t>(l)] = std::move(acc);
			}
			for (int k = 0; k < d; ++k) {
				ChartFunction acc(chart);
				for (int l = 0; l < d; ++l)
					acc += f.inv_jacobian(k, l) * bracket[static_cast<size_t>(l)];
				gamma[static_cast<size_t>((k * d + i) * d + j)] = acc;
				gamma[static_cast<size_t>((k * d + j) * d + i)] = std::move(acc);
			}
		}
	return Connection::from_christoffels(chart, std::move(gamma));
}

Connection pi_nabla(const DiffeoFamily &f, const Connection &conn)
{
	if (!conn.is_symplectic())
		fail(errc::precondition, "pi_nabla needs a symplectic base connection");
	return n_symmetrize(pullback_connection(f, conn));
}

CurvatureTensor::CurvatureTensor(const Connection &conn) : chart_(conn.chart())
{
	const int d = chart_.dim();
	r_.assign(static_cast<size_t>(d * d * d * d), ChartFunction(chart_));
	for (int r = 0; r < d; ++r)
		for (int j = 0; j < d; ++j)
			for (int k = 0; k < d; ++k)
				for (int l = 0; l < k; ++l) {
					ChartFunction c = conn.gamma(r, l, j).derivative(k) - conn.gamma(r, k, j).derivative(l);
					for (int p = 0; p < d; ++p)
						c += conn.gamma(r, k, p) * conn.gamma(p, l, j) -
						     conn.gamma(r, l, p) * conn.gamma(p, k, j);
					r_[static_cast<size_t>(((r * d + j) * d + k) * d + l)] = c;
					r_[static_cast<size_t>(((r * d + j) * d + l) * d + k)] = -c;
				}
}

const ChartFunction &CurvatureTensor::at(int r, int j, int k, int l) const
{
	const int d = chart_.dim();
	return r_[static_cast<size_t>(((r * d + j) * d + k) * d + l)];
}

ChartFunction covariant_hessian(const Connection &conn, const ChartFunction &h, int k, int q)
{
	ChartFunction r = h.derivative(k).derivative(q);
	for (int l = 0; l < conn.chart().dim(); ++l)
		r -= conn.gamma(l, k, q) * h.derivative(l);
	return r;
}

} // namespace fedq
