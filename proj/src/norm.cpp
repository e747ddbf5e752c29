#include "tenspec/norm.hpp"

#include <cmath>
#include <random>

#include "tenspec/errors.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/random.hpp"

namespace tenspec {

namespace {

struct Run {
    double value;
    std::vector<Vector> xs;
    bool monotone;
};

Run alternate(const DenseTensor& t, std::vector<Vector> xs, const NormOptions& opt) {
    const std::size_t d = t.order();
    double value = contract_all(t, xs);
    bool monotone = true;
    for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double now = value;
        for (std::size_t k = 0; k < d; ++k) {
            Vector c = contract_except(t, xs, k);
            const double nc = c.norm();
            if (nc > 0.0) xs[k] = c / nc;
            now = nc > 0.0 ? nc : now;
        }
        if (now < value - 1e-12 * std::max(1.0, value)) monotone = false;
        const double gain = now - value;
        value = std::max(value, now);
        if (gain <= opt.tol * std::max(value, 1e-300)) break;
    }
    return {contract_all(t, xs), xs, monotone};
}

}  // namespace

NormCertificate spectral_norm(const DenseTensor& t, const NormOptions& opt) {
    for (double v : t.values())
        if (!(v >= 0.0)) throw DomainError("spectral_norm needs a nonnegative tensor");
    const Shape& s = t.shape();
    Rng rng(opt.seed);
    NormCertificate cert;
    cert.restarts = opt.restarts + 1;
    for (std::size_t start = 0; start <= opt.restarts; ++start) {
        std::vector<Vector> xs;
        for (std::size_t k = 0; k < s.order(); ++k) {
            Vector x = start == 0 ? Vector::Ones(static_cast<Eigen::Index>(s.dim(k)))
                                  : random_positive_vector(rng, s.dim(k), 0.0, 1.0);
            if (x.norm() == 0.0) x.setOnes();
            xs.push_back(x.normalized());
        }
        Run r = alternate(t, xs, opt);
        cert.monotone = cert.monotone && r.monotone;
        cert.start_values.push_back(r.value);
        if (start == 0 || r.value > cert.value) {
            cert.value = r.value;
            cert.maximizers = r.xs;
        }
    }
    for (double v : cert.start_values)
        if (std::abs(v - cert.value) <= 1e-8 * std::max(cert.value, 1e-300)) ++cert.agreeing_starts;
    return cert;
}

double hilbert_schmidt(const DenseTensor& t) {
    double s = 0.0;
    for (double v : t.values()) s += v * v;
    return std::sqrt(s);
}

double ell_inf(const DenseTensor& t) {
    double m = 0.0;
    for (double v : t.values()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// "lhs <= rhs" where the rhs is a norm known through [lower, upper]
CheckRecord bounded_le(std::string id, std::string ref, double lhs, double rhs_lower, double rhs_upper, double tol) {
    CheckRecord c;
    c.id = std::move(id);
    c.reference = std::move(ref);
    c.tolerance = tol * std::max(1.0, std::abs(rhs_upper));
    c.margin = rhs_lower - lhs;
    if (c.margin >= -c.tolerance) {
        c.status = Status::pass;
        c.bound = "lower (alternating maximization)";
    } else if (rhs_upper - lhs >= -c.tolerance) {
        c.status = Status::inconclusive;
        c.bound = "upper (Hilbert-Schmidt envelope)";
        c.margin = rhs_upper - lhs;
    } else {
        c.status = Status::fail;
        c.bound = "upper (Hilbert-Schmidt envelope)";
        c.margin = rhs_upper - lhs;
    }
    return c;
}

struct NormRange {
    double lower, upper;
    bool stabilized;
};

NormRange range(const DenseTensor& t, const NormOptions& opt) {
    NormCertificate c = spectral_norm(t, opt);
    return {c.value, hilbert_schmidt(t), c.stabilized()};
}

// ||T^{.s}||^{1/s} through the scaled tensor (T / max)^{.s}
NormRange power_range(const DenseTensor& t, double s, const NormOptions& opt) {
    const double m = ell_inf(t);
    if (m == 0.0) return {0.0, 0.0, true};
    NormRange r = range(hadamard_power(t.scaled(1.0 / m), s), opt);
    return {m * std::pow(r.lower, 1.0 / s), m * std::pow(r.upper, 1.0 / s), r.stabilized};
}

DenseTensor random_subtensor(const DenseTensor& t, Rng& rng) {
    const Shape& s = t.shape();
    std::vector<std::vector<std::size_t>> keep(s.order());
    for (std::size_t k = 0; k < s.order(); ++k) {
        std::bernoulli_distribution b(0.6);
        for (std::size_t i = 0; i < s.dim(k); ++i)
            if (b(rng)) keep[k].push_back(i);
        if (keep[k].empty()) keep[k].push_back(std::uniform_int_distribution<std::size_t>(0, s.dim(k) - 1)(rng));
    }
    std::vector<std::size_t> dims;
    for (auto& kk : keep) dims.push_back(kk.size());
    Shape sub(dims);
    std::vector<double> v(sub.size());
    Index idx(s.order(), 0), orig(s.order());
    std::size_t f = 0;
    do {
        for (std::size_t k = 0; k < idx.size(); ++k) orig[k] = keep[k][idx[k]];
        v[f++] = t(orig);
    } while (sub.next(idx));
    return DenseTensor(sub, std::move(v), false);
}

}  // namespace

CheckRecord norm_radius_bound_check(const DenseTensor& t, const NormOptions& opt, double tol) {
    const std::size_t n = t.n();
    const double factor = std::pow(static_cast<double>(n), (static_cast<double>(t.order()) - 2.0) / 2.0);
    const double rho = spectral_radius(t).rho;
    NormRange r = range(t, opt);
    CheckRecord c = bounded_le("norm-radius-bound", "spectral radius bounded by the spectral norm", rho,
                               r.lower * factor, r.upper * factor, tol);
    c.detail = "rho=" + std::to_string(rho) + " norm>=" + std::to_string(r.lower);
    return c;
}

std::vector<CheckRecord> norm_inequality_suite(const DenseTensor& a, const DenseTensor& b, const NormSuiteParams& p) {
    for (const DenseTensor* t : {&a, &b})
        for (double v : t->values())
            if (!(v >= 0.0)) throw DomainError("norm_inequality_suite needs nonnegative tensors");
    Rng rng(p.seed);
    const double tol = p.tol;
    std::vector<CheckRecord> out;
    const NormRange ra = range(a, p.norm), rb = range(b, p.norm);

    // 1: l_inf lower bound, sandwich, and domination of signed versions
    {
        const double li = ell_inf(a);
        CheckRecord c;
        c.id = "norm-lower-bound";
        c.reference = "max entry bounds the spectral norm from below";
        c.tolerance = tol * std::max(1.0, li);
        c.margin = ra.lower - li;
        c.bound = "lower (alternating maximization)";
        c.status = c.margin >= -c.tolerance ? Status::pass : (ra.upper >= li ? Status::inconclusive : Status::fail);
        out.push_back(c);

        const double M = static_cast<double>(a.size());
        CheckRecord s;
        s.id = "norm-sandwich";
        s.reference = "l_inf <= spectral <= Hilbert-Schmidt <= sqrt(M) l_inf";
        s.tolerance = tol * std::max(1.0, ra.upper);
        s.margin = std::min({ra.lower - li, ra.upper - ra.lower, std::sqrt(M) * li - ra.upper});
        s.bound = "both";
        s.status = status_from_margin(s.margin, s.tolerance);
        out.push_back(s);

        // random signs: |S x...x| over unit vectors never beats the norm of |S|
        std::bernoulli_distribution coin(0.5);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> sv = a.values();
        for (double& v : sv)
            if (coin(rng)) v = -v;
        DenseTensor signed_t(a.shape(), std::move(sv), false);
        double worst = 0.0;
        for (int k = 0; k < 64; ++k) {
            std::vector<Vector> xs;
            for (std::size_t m = 0; m < a.order(); ++m) {
                Vector x(static_cast<Eigen::Index>(a.shape().dim(m)));
                for (auto& e : x) e = g(rng);
                xs.push_back(x.normalized());
            }
            worst = std::max(worst, std::abs(contract_all(signed_t, xs)));
        }
        out.push_back(bounded_le("norm-abs-domination", "a signed tensor is dominated by its absolute value", worst,
                                 ra.lower, ra.upper, tol));
    }

    // 2: outer product multiplicativity
    {
        const NormRange rab = range(outer(a, b), p.norm);
        CheckRecord c;
        c.id = "norm-outer-product";
        c.reference = "spectral norm is multiplicative over outer products";
        const double prod = ra.lower * rb.lower;
        c.tolerance = 1e-6 * std::max(1.0, prod);
        c.margin = -std::abs(rab.lower - prod);
        c.bound = "lower on both sides";
        const bool rigorous_violation = rab.lower > ra.upper * rb.upper * (1 + tol) || prod > rab.upper * (1 + tol);
        if (rigorous_violation)
            c.status = Status::fail;
        else if (-c.margin <= c.tolerance && ra.stabilized && rb.stabilized && rab.stabilized)
            c.status = Status::pass;
        else
            c.status = Status::inconclusive;
        out.push_back(c);
    }

    // 3: subtensors
    {
        DenseTensor sub = random_subtensor(a, rng);
        const NormRange rs = range(sub, p.norm);
        out.push_back(bounded_le("norm-subtensor", "subtensor norm is at most the tensor norm", rs.lower, ra.lower,
                                 ra.upper, tol));
    }

    const bool same = a.shape() == b.shape();
    if (same) {
        // 4: Hadamard product
        const NormRange rh = range(hadamard(a, b), p.norm);
        out.push_back(bounded_le("norm-hadamard", "norm of a Hadamard product is submultiplicative", rh.lower,
                                 ra.lower * rb.lower, ra.upper * rb.upper, tol));

        // 5: log-convexity along a^{1-tau} . b^{tau}
        std::uniform_real_distribution<double> ut(0.0, 1.0);
        const double t1 = ut(rng), t2 = ut(rng), tm = 0.5 * (t1 + t2);
        auto path = [&](double tau) {
            return range(hadamard(hadamard_power(a, 1.0 - tau), hadamard_power(b, tau)), p.norm);
        };
        const NormRange r1 = path(t1), r2 = path(t2), rm = path(tm);
        out.push_back(bounded_le("norm-logconvex", "spectral norm is log-convex in the log-entries", rm.lower,
                                 std::sqrt(r1.lower * r2.lower), std::sqrt(r1.upper * r2.upper), tol));

        // 6: Hoelder
        const double al = p.alpha;
        const NormRange rk = range(hadamard(hadamard_power(a, al), hadamard_power(b, 1.0 - al)), p.norm);
        CheckRecord c = bounded_le("norm-hoelder", "Hoelder inequality for the spectral norm", rk.lower,
                                   std::pow(ra.lower, al) * std::pow(rb.lower, 1.0 - al),
                                   std::pow(ra.upper, al) * std::pow(rb.upper, 1.0 - al), tol);
        c.detail = "alpha=" + std::to_string(al);
        out.push_back(c);
    }

    // 7: ||a^{.s}||^{1/s} decreasing, tending to l_inf
    {
        std::vector<NormRange> tr;
        for (double s = 1.0; s <= 256.0; s *= 2.0) tr.push_back(power_range(a, s, p.norm));
        double worst = std::numeric_limits<double>::infinity();
        double worst_rig = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < tr.size(); ++k) {
            worst = std::min(worst, tr[k - 1].lower - tr[k].lower);
            worst_rig = std::min(worst_rig, tr[k - 1].upper - tr[k].lower);
        }
        CheckRecord c;
        c.id = "norm-power-decreasing";
        c.reference = "s -> ||T^{.s}||^{1/s} is decreasing";
        c.tolerance = tol * std::max(1.0, tr.front().upper);
        c.margin = worst;
        c.bound = "lower on both sides";
        if (worst >= -c.tolerance)
            c.status = Status::pass;
        else if (worst_rig >= -c.tolerance)
            c.status = Status::inconclusive, c.bound = "upper (Hilbert-Schmidt envelope) for the earlier term";
        else
            c.status = Status::fail;
        out.push_back(c);

        CheckRecord l;
        l.id = "norm-power-limit";
        l.reference = "||T^{.s}||^{1/s} tends to the max entry";
        l.tolerance = 1e-3;
        const double li = ell_inf(a);
        l.margin = l.tolerance - std::abs(tr.back().lower - li);
        l.bound = "lower (alternating maximization), s=256";
        // a finite s can only contradict the limit if the norm sits below the max entry
        if (l.margin >= 0.0)
            l.status = Status::pass;
        else if (tr.back().upper < li - tol * std::max(1.0, li))
            l.status = Status::fail;
        else
            l.status = Status::inconclusive;
        l.detail = "gap at s=256 " + std::to_string(tr.back().lower - li) + ", Hilbert-Schmidt envelope gap " +
                   std::to_string(tr.back().upper - li);
        out.push_back(l);
    }

    // 8: monotonicity and the l_inf / pattern bounds
    {
        std::vector<double> mv = a.values();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : mv) v *= u(rng);
        const NormRange re = range(DenseTensor(a.shape(), std::move(mv), false), p.norm);
        out.push_back(bounded_le("norm-monotone", "entrywise smaller tensor has smaller norm", re.lower, ra.lower,
                                 ra.upper, tol));
        if (same) {
            const NormRange rte = range(hadamard(a, b), p.norm);
            const double lb = ell_inf(b);
            out.push_back(bounded_le("norm-hadamard-linf", "||T.E|| <= ||T|| max|E|", rte.lower, ra.lower * lb,
                                     ra.upper * lb, tol));
        }
        const NormRange rp = range(pattern(b), p.norm);
        const double lb = ell_inf(b);
        out.push_back(bounded_le("norm-pattern", "||E|| <= ||pat E|| max|E|", rb.lower, rp.lower * lb, rp.upper * lb, tol));
    }
    return out;
}

}  // namespace tenspec
