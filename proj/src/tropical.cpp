#include "tenspec/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "tenspec/errors.hpp"
#include "tenspec/markov.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/structure.hpp"

namespace tenspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log-domain MDP: states [n], actions = concise entries
struct Mdp {
    const SparseSupportTensor& t;
    std::size_t n, d;
    double dm1;
    std::vector<bool> live;
    std::vector<std::vector<std::size_t>> actions;  // per state, lexicographic

    explicit Mdp(const SparseSupportTensor& s)
        : t(s), n(s.n()), d(s.order()), dm1(static_cast<double>(s.order() - 1)), live(s.n(), true), actions(s.n()) {
        // drop states without actions, then actions touching dropped states, until stable
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                actions[i].clear();
                if (!live[i]) continue;
                for (std::size_t e : t.by_state()[i]) {
                    const Index& idx = t.entries()[e].idx;
                    bool ok = true;
                    for (std::size_t k = 1; k < d; ++k) ok &= static_cast<bool>(live[idx[k]]);
                    if (ok) actions[i].push_back(e);
                }
                if (actions[i].empty()) {
                    live[i] = false;
                    changed = true;
                }
            }
        }
    }

    double reward(std::size_t e) const { return std::log(t.entries()[e].value); }
    const Index& idx(std::size_t e) const { return t.entries()[e].idx; }
    double tail_sum(std::size_t e, const Vector& x) const {
        double s = 0.0;
        for (std::size_t k = 1; k < d; ++k) s += x[static_cast<Eigen::Index>(idx(e)[k])];
        return s;
    }
    bool any_live() const { return std::find(live.begin(), live.end(), true) != live.end(); }
};

// tropical operator in log coordinates: max_a (r_a + sum_tail x) / (d-1)
Vector log_operator(const Mdp& m, const Vector& x) {
    Vector out = Vector::Constant(static_cast<Eigen::Index>(m.n), kNegInf);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t e : m.actions[i])
            out[static_cast<Eigen::Index>(i)] = std::max(out[static_cast<Eigen::Index>(i)], (m.reward(e) + m.tail_sum(e, x)) / m.dm1);
    return out;
}

Vector exp_normalized(const Vector& x) {
    double mx = kNegInf;
    for (double v : x) mx = std::max(mx, v);
    Vector v(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = x[i] == kNegInf ? 0.0 : std::exp(x[i] - mx);
    return v;
}

TropicalEigenPair make_pair(double log_rho, Vector v, TropicalMethod m) {
    TropicalEigenPair p;
    p.log_rho_trop = log_rho;
    p.rho_trop = std::exp(log_rho);
    p.v = std::move(v);
    p.method = m;
    return p;
}

// transition matrix and rewards of a complete policy on the live states
struct Chain {
    Matrix P;
    Vector r;
};

Chain chain_of(const Mdp& m, const std::vector<std::size_t>& states, const std::vector<std::size_t>& act) {
    const Eigen::Index L = static_cast<Eigen::Index>(states.size());
    std::vector<Eigen::Index> pos(m.n, -1);
    for (Eigen::Index k = 0; k < L; ++k) pos[states[static_cast<std::size_t>(k)]] = k;
    Chain c{Matrix::Zero(L, L), Vector::Zero(L)};
    for (Eigen::Index k = 0; k < L; ++k) {
        const std::size_t e = act[static_cast<std::size_t>(k)];
        c.r[k] = m.reward(e);
        for (std::size_t q = 1; q < m.d; ++q) c.P(k, pos[m.idx(e)[q]]) += 1.0 / m.dm1;
    }
    return c;
}

struct Evaluation {
    Vector g, h;
};

Evaluation evaluate(const Chain& c) {
    const Eigen::Index L = c.P.rows();
    Evaluation ev{Vector::Zero(L), Vector::Zero(L)};
    std::vector<bool> recurrent(static_cast<std::size_t>(L), false);
    for (const auto& cls : recurrent_classes(c.P)) {
        Vector z = stationary_distribution(c.P, cls);
        double gain = 0.0;
        for (std::size_t k = 0; k < cls.size(); ++k) gain += z[static_cast<Eigen::Index>(k)] * c.r[static_cast<Eigen::Index>(cls[k])];
        const Eigen::Index K = static_cast<Eigen::Index>(cls.size());
        Matrix M = Matrix::Identity(K, K);
        Vector rhs(K);
        for (Eigen::Index a = 0; a < K; ++a) {
            for (Eigen::Index b = 0; b < K; ++b) M(a, b) -= c.P(cls[a], cls[b]);
            rhs[a] = c.r[static_cast<Eigen::Index>(cls[a])] - gain;
        }
        // bias pinned to 0 at the smallest state of the class
        M.row(0).setZero();
        M(0, 0) = 1.0;
        rhs[0] = 0.0;
        Vector h = M.fullPivLu().solve(rhs);
        for (Eigen::Index a = 0; a < K; ++a) {
            ev.g[static_cast<Eigen::Index>(cls[a])] = gain;
            ev.h[static_cast<Eigen::Index>(cls[a])] = h[a];
            recurrent[cls[a]] = true;
        }
    }
    std::vector<Eigen::Index> tr, rc;
    for (Eigen::Index k = 0; k < L; ++k) (recurrent[static_cast<std::size_t>(k)] ? rc : tr).push_back(k);
    if (!tr.empty()) {
        const Eigen::Index T = static_cast<Eigen::Index>(tr.size());
        Matrix M = Matrix::Identity(T, T);
        Vector bg = Vector::Zero(T), bh = Vector::Zero(T);
        for (Eigen::Index a = 0; a < T; ++a) {
            for (Eigen::Index b = 0; b < T; ++b) M(a, b) -= c.P(tr[a], tr[b]);
            for (Eigen::Index q : rc) {
                bg[a] += c.P(tr[a], q) * ev.g[q];
                bh[a] += c.P(tr[a], q) * ev.h[q];
            }
        }
        auto lu = M.fullPivLu();
        Vector gt = lu.solve(bg);
        for (Eigen::Index a = 0; a < T; ++a) bh[a] += c.r[tr[a]] - gt[a];
        Vector ht = lu.solve(bh);
        for (Eigen::Index a = 0; a < T; ++a) {
            ev.g[tr[a]] = gt[a];
            ev.h[tr[a]] = ht[a];
        }
    }
    return ev;
}

std::vector<std::size_t> live_states(const Mdp& m) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m.n; ++i)
        if (m.live[i]) s.push_back(i);
    return s;
}

// states with no actions at all: tropical eigenvector support when nothing is live
Vector dead_indicator(const SparseSupportTensor& t) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(t.n()));
    for (std::size_t i = 0; i < t.n(); ++i)
        if (t.by_state()[i].empty()) v[static_cast<Eigen::Index>(i)] = 1.0;
    if (v.sum() == 0.0) v.setOnes();
    return v;
}

void require_weakly_irreducible(const SparseSupportTensor& t) {
    if (!weak_irreducibility(dense_from_sparse(t)).holds)
        throw DomainError("km iteration needs a weakly irreducible support");
}

}  // namespace

const char* method_name(TropicalMethod m) {
    switch (m) {
        case TropicalMethod::km_iteration: return "km_iteration";
        case TropicalMethod::policy_iteration: return "policy_iteration";
        default: return "cycle_enumeration";
    }
}

bool Policy::partial() const {
    return std::any_of(choice.begin(), choice.end(), [](const auto& c) { return !c.has_value(); });
}

Vector tropical_apply(const SparseSupportTensor& t, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != t.n()) throw ShapeError("vector length does not match n");
    Vector out = Vector::Zero(x.size());
    for (const SparseEntry& e : t.entries()) {
        double p = e.value;
        for (std::size_t k = 1; k < e.idx.size(); ++k) p *= x[static_cast<Eigen::Index>(e.idx[k])];
        double& o = out[static_cast<Eigen::Index>(e.idx[0])];
        o = std::max(o, p);
    }
    return out;
}

double tropical_eigen_residual(const SparseSupportTensor& t, const TropicalEigenPair& p) {
    Vector tv = tropical_apply(t, p.v);
    const double dm1 = static_cast<double>(t.order() - 1);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.v.size(); ++i) {
        if (p.v[i] <= 0.0) continue;
        const double rhs = p.rho_trop * std::pow(p.v[i], dm1);
        worst = std::max(worst, std::abs(tv[i] - rhs) / rhs);
    }
    return worst;
}

TropicalEigenPair tropical_eigenpair_km(const SparseSupportTensor& t, const KmOptions& opt) {
    require_weakly_irreducible(t);
    Mdp m(t);
    const Eigen::Index n = static_cast<Eigen::Index>(t.n());
    Vector y = Vector::Zero(n);
    double osc = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < opt.max_iter; ++it) {
        Vector fy = log_operator(m, y);
        Vector diff = fy - y;
        const double lo = diff.minCoeff(), hi = diff.maxCoeff();
        osc = hi - lo;
        if (osc <= opt.tol) {
            TropicalEigenPair p = make_pair(m.dm1 * 0.5 * (lo + hi), exp_normalized(y), TropicalMethod::km_iteration);
            p.iterations = it + 1;
            return p;
        }
        y = 0.5 * (y + fy);
        y.array() -= y.mean();
    }
    throw ConvergenceError("km iteration hit max_iter; oscillation " + std::to_string(osc), 0, osc, opt.max_iter);
}

TropicalEigenPair tropical_eigenpair_policy(const SparseSupportTensor& t) {
    Mdp m(t);
    if (!m.any_live()) {
        TropicalEigenPair p = make_pair(kNegInf, dead_indicator(t), TropicalMethod::policy_iteration);
        p.rho_trop = 0.0;
        p.optimal_policy = Policy{std::vector<std::optional<std::size_t>>(t.n())};
        return p;
    }
    const std::vector<std::size_t> states = live_states(m);
    const std::size_t L = states.size();
    double rscale = 0.0;
    for (const SparseEntry& e : t.entries()) rscale = std::max(rscale, std::abs(std::log(e.value)));
    const double eps = 1e-12 * (1.0 + rscale);

    std::vector<std::size_t> act(L);
    for (std::size_t k = 0; k < L; ++k) {
        const auto& as = m.actions[states[k]];
        act[k] = *std::max_element(as.begin(), as.end(), [&](std::size_t a, std::size_t b) { return m.reward(a) < m.reward(b); });
    }
    std::vector<Eigen::Index> pos(m.n, -1);
    for (std::size_t k = 0; k < L; ++k) pos[states[k]] = static_cast<Eigen::Index>(k);
    auto expect = [&](std::size_t e, const Vector& x) {
        double s = 0.0;
        for (std::size_t q = 1; q < m.d; ++q) s += x[pos[m.idx(e)[q]]];
        return s / m.dm1;
    };

    Evaluation ev;
    std::size_t iter = 0;
    for (;; ++iter) {
        if (iter > 100000) throw ConvergenceError("policy iteration did not terminate", 0, 0, iter);
        ev = evaluate(chain_of(m, states, act));
        bool changed = false;
        // gain improvement
        for (std::size_t k = 0; k < L; ++k) {
            const auto& as = m.actions[states[k]];
            double best = kNegInf;
            for (std::size_t e : as) best = std::max(best, expect(e, ev.g));
            if (best > expect(act[k], ev.g) + eps) {
                for (std::size_t e : as)
                    if (expect(e, ev.g) >= best - eps) {
                        act[k] = e;
                        break;
                    }
                changed = true;
            }
        }
        if (changed) continue;
        // bias improvement among gain-optimal actions
        for (std::size_t k = 0; k < L; ++k) {
            const auto& as = m.actions[states[k]];
            const double gk = ev.g[static_cast<Eigen::Index>(k)];
            auto q = [&](std::size_t e) { return m.reward(e) + expect(e, ev.h); };
            double best = kNegInf;
            for (std::size_t e : as)
                if (expect(e, ev.g) >= gk - eps) best = std::max(best, q(e));
            if (best > q(act[k]) + eps) {
                for (std::size_t e : as)
                    if (expect(e, ev.g) >= gk - eps && q(e) >= best - eps) {
                        act[k] = e;
                        break;
                    }
                changed = true;
            }
        }
        if (!changed) break;
    }

    const double gmax = ev.g.maxCoeff();
    Vector x = Vector::Constant(static_cast<Eigen::Index>(m.n), kNegInf);
    for (std::size_t k = 0; k < L; ++k)
        if (ev.g[static_cast<Eigen::Index>(k)] >= gmax - 1e-9 * (1.0 + std::abs(gmax)))
            x[static_cast<Eigen::Index>(states[k])] = ev.h[static_cast<Eigen::Index>(k)] / m.dm1;
    TropicalEigenPair p = make_pair(gmax, exp_normalized(x), TropicalMethod::policy_iteration);
    Policy pol{std::vector<std::optional<std::size_t>>(m.n)};
    for (std::size_t k = 0; k < L; ++k) pol.choice[states[k]] = act[k];
    p.optimal_policy = pol;
    p.iterations = iter + 1;
    return p;
}

std::size_t policy_count(const SparseSupportTensor& t) {
    Mdp m(t);
    std::size_t total = 1;
    for (std::size_t i = 0; i < m.n; ++i) {
        if (!m.live[i]) continue;
        const std::size_t c = m.actions[i].size();
        if (total > std::numeric_limits<std::size_t>::max() / c) return std::numeric_limits<std::size_t>::max();
        total *= c;
    }
    return total;
}

std::vector<KCycle> enumerate_k_cycles(const SparseSupportTensor& t, std::size_t cap) {
    const std::size_t count = policy_count(t);
    if (count > cap)
        throw CapabilityError("k-cycle enumeration needs " + (count == std::numeric_limits<std::size_t>::max() ? std::string("too many") : std::to_string(count)) +
                              " policies; cap is " + std::to_string(cap));
    Mdp m(t);
    std::vector<KCycle> out;
    if (!m.any_live()) return out;
    const std::vector<std::size_t> states = live_states(m);
    const std::size_t L = states.size();
    std::vector<std::size_t> odo(L, 0), act(L);
    std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen;
    while (true) {
        for (std::size_t k = 0; k < L; ++k) act[k] = m.actions[states[k]][odo[k]];
        Chain c = chain_of(m, states, act);
        for (const auto& cls : recurrent_classes(c.P)) {
            std::vector<std::pair<std::size_t, std::size_t>> key;
            for (std::size_t k : cls) key.push_back({states[k], act[k]});
            if (!seen.insert(key).second) continue;
            KCycle g;
            const Eigen::Index K = static_cast<Eigen::Index>(cls.size());
            g.A = Matrix::Zero(K, K);
            for (Eigen::Index a = 0; a < K; ++a) {
                g.vertices.push_back(states[cls[a]]);
                g.actions.push_back(act[cls[a]]);
                for (Eigen::Index b = 0; b < K; ++b) g.A(a, b) = c.P(cls[a], cls[b]) * m.dm1;
            }
            std::vector<std::size_t> all(cls.size());
            for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
            g.u = stationary_distribution(g.A / m.dm1, all);
            g.A = g.A.array().round();
            out.push_back(std::move(g));
        }
        std::size_t k = 0;
        while (k < L && ++odo[k] == m.actions[states[k]].size()) odo[k++] = 0;
        if (k == L) break;
    }
    return out;
}

double log_cycle_weight(const KCycle& g, const SparseSupportTensor& t) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.vertices.size(); ++k) {
        if (g.actions[k] >= t.entries().size() || t.entries()[g.actions[k]].idx[0] != g.vertices[k])
            throw DomainError("cycle action is not in the support");
        s += g.u[static_cast<Eigen::Index>(k)] * std::log(t.entries()[g.actions[k]].value);
    }
    return s;
}

double cycle_weight(const KCycle& g, const SparseSupportTensor& t) { return std::exp(log_cycle_weight(g, t)); }

TropicalEigenPair tropical_radius_by_cycles(const SparseSupportTensor& t, std::size_t cap) {
    std::vector<KCycle> cycles = enumerate_k_cycles(t, cap);
    if (cycles.empty()) {
        TropicalEigenPair p = make_pair(kNegInf, dead_indicator(t), TropicalMethod::cycle_enumeration);
        p.rho_trop = 0.0;
        return p;
    }
    std::size_t best = 0;
    double lw = kNegInf;
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        const double w = log_cycle_weight(cycles[k], t);
        if (w > lw) {
            lw = w;
            best = k;
        }
    }
    // eigenvector: solve the cycle's own equations, then raise monotonically
    Mdp m(t);
    const KCycle& g = cycles[best];
    const Eigen::Index K = static_cast<Eigen::Index>(g.vertices.size());
    Matrix M = Matrix::Identity(K, K) * m.dm1 - g.A;
    Vector rhs(K);
    for (Eigen::Index a = 0; a < K; ++a) rhs[a] = m.reward(g.actions[static_cast<std::size_t>(a)]) - lw;
    M.row(0).setZero();
    M(0, 0) = 1.0;
    rhs[0] = 0.0;
    Vector xc = M.fullPivLu().solve(rhs);
    Vector x = Vector::Constant(static_cast<Eigen::Index>(m.n), kNegInf);
    for (Eigen::Index a = 0; a < K; ++a) x[static_cast<Eigen::Index>(g.vertices[static_cast<std::size_t>(a)])] = xc[a];
    std::size_t it = 0;
    for (; it < 1000000; ++it) {
        Vector nx = log_operator(m, x).array() - lw / m.dm1;
        nx = nx.cwiseMax(x);
        double change = 0.0, size = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (nx[i] == kNegInf) continue;
            size = std::max(size, std::abs(nx[i]));
            change = std::max(change, x[i] == kNegInf ? std::numeric_limits<double>::infinity() : nx[i] - x[i]);
        }
        x = nx;
        if (change <= 1e-15 * (1.0 + size)) break;
    }
    TropicalEigenPair p = make_pair(lw, exp_normalized(x), TropicalMethod::cycle_enumeration);
    p.iterations = it + 1;
    Policy pol{std::vector<std::optional<std::size_t>>(m.n)};
    for (std::size_t k = 0; k < g.vertices.size(); ++k) pol.choice[g.vertices[k]] = g.actions[k];
    p.optimal_policy = pol;
    return p;
}

std::vector<double> policy_occupation(const SparseSupportTensor& t, const TropicalEigenPair& p) {
    if (!p.optimal_policy) throw DomainError("eigenpair carries no policy");
    const Policy& pol = *p.optimal_policy;
    Mdp m(t);
    std::vector<std::size_t> states, act;
    for (std::size_t i = 0; i < t.n(); ++i)
        if (pol.choice[i]) {
            states.push_back(i);
            act.push_back(*pol.choice[i]);
        }
    // close the domain under transitions is guaranteed for policies from the solvers
    Chain c = chain_of(m, states, act);
    std::vector<double> mu(t.entries().size(), 0.0);
    double best = kNegInf;
    std::vector<std::size_t> best_cls;
    Vector best_z;
    for (const auto& cls : recurrent_classes(c.P)) {
        Vector z = stationary_distribution(c.P, cls);
        double gain = 0.0;
        for (std::size_t k = 0; k < cls.size(); ++k) gain += z[static_cast<Eigen::Index>(k)] * c.r[static_cast<Eigen::Index>(cls[k])];
        if (gain > best) {
            best = gain;
            best_cls = cls;
            best_z = z;
        }
    }
    for (std::size_t k = 0; k < best_cls.size(); ++k) mu[act[best_cls[k]]] = best_z[static_cast<Eigen::Index>(k)];
    return mu;
}

std::vector<double> default_s_schedule() {
    std::vector<double> s;
    for (double v = 1.0; v <= 256.0; v *= 2.0) s.push_back(v);
    return s;
}

RhoInfinity rho_infinity(const DenseTensor& t, const std::vector<double>& schedule) {
    if (schedule.empty()) throw DomainError("empty s schedule");
    RhoInfinity out;
    for (double s : schedule) {
        LogRadius lr = log_spectral_radius_power(t, s);
        const double v = lr.zero ? 0.0 : std::exp(lr.log_rho / s);
        out.regularized = out.regularized || lr.regularized;
        out.trace.push_back({s, v});
        out.value = v;
    }
    return out;
}

TropicalBoundsReport tropical_bounds_check(const DenseTensor& t, const DenseTensor& e, double tol) {
    if (!(t.shape() == e.shape())) throw ShapeError("tropical_bounds_check needs matching shapes");
    TropicalBoundsReport r;
    r.rho_t = spectral_radius(t).rho;
    r.rho_e = spectral_radius(e).rho;
    r.rho_te = spectral_radius(hadamard(t, e)).rho;
    r.rho_pattern_e = spectral_radius(pattern(e)).rho;
    r.rho_trop_e = tropical_eigenpair_policy(sparse_from_dense(e)).rho_trop;
    const double b1 = r.rho_t * r.rho_trop_e, b2 = r.rho_pattern_e * r.rho_trop_e;
    r.hadamard_margin = b1 - r.rho_te;
    r.pattern_margin = b2 - r.rho_e;
    r.pass = r.hadamard_margin >= -tol * std::max(1.0, b1) && r.pattern_margin >= -tol * std::max(1.0, b2);
    return r;
}

}  // namespace tenspec
