#include "tenspec/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "tenspec/entropy.hpp"
#include "tenspec/errors.hpp"
#include "tenspec/io.hpp"
#include "tenspec/lp.hpp"
#include "tenspec/norm.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/random.hpp"
#include "tenspec/structure.hpp"
#include "tenspec/tropical.hpp"
#include "tenspec/version.hpp"

namespace tenspec {

bool AuditReport::any_fail() const {
    return std::any_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == Status::fail; });
}

const std::vector<std::string>& audit_suites() {
    static const std::vector<std::string> s = {"perron", "entropy", "tropical", "norms", "structure", "all"};
    return s;
}

std::string tensor_digest(const DenseTensor& t) {
    const std::string text = to_json(t).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

namespace {

double scale(double x) { return std::max(1.0, std::abs(x)); }

CheckRecord record(std::string id, std::string ref, double margin, double tol, std::string detail = "") {
    CheckRecord c;
    c.id = std::move(id);
    c.reference = std::move(ref);
    c.margin = margin;
    c.tolerance = tol;
    c.status = status_from_margin(margin, tol);
    c.detail = std::move(detail);
    return c;
}

CheckRecord not_applicable(std::string id, std::string ref, std::string why) {
    CheckRecord c;
    c.id = std::move(id);
    c.reference = std::move(ref);
    c.status = Status::inconclusive;
    c.detail = std::move(why);
    return c;
}

// unmet hypotheses and solver failures are reported, not counted as violations
void guarded(std::vector<CheckRecord>& out, const std::string& id, const std::string& ref,
             const std::function<void(std::vector<CheckRecord>&)>& body) {
    try {
        body(out);
    } catch (const ConvergenceError& e) {
        out.push_back(not_applicable(id, ref, std::string("no convergence: ") + e.what()));
    } catch (const CapabilityError& e) {
        out.push_back(not_applicable(id, ref, e.what()));
    } catch (const DomainError& e) {
        out.push_back(not_applicable(id, ref, std::string("hypothesis not met: ") + e.what()));
    }
}

DenseTensor random_mask(const DenseTensor& t, Rng& rng) {
    // entrywise factors in (0,1], constant on tail orbits
    std::vector<double> v(t.size(), 0.0);
    Index idx(t.order(), 0);
    do {
        if (!std::is_sorted(idx.begin() + 1, idx.end())) continue;
        const double f = uniform01(rng);
        Index p = idx;
        do {
            v[t.shape().flat(p)] = f;
        } while (std::next_permutation(p.begin() + 1, p.end()));
    } while (t.shape().next(idx));
    return hadamard(t, DenseTensor(t.shape(), std::move(v), true));
}

void structure_suite(const DenseTensor& t, Rng& rng, std::vector<CheckRecord>& out) {
    const StructureReport s = analyze_structure(t);
    const bool irr = s.irreducible && s.irreducible->holds;
    const bool wirr = s.weakly_irreducible && s.weakly_irreducible->holds;
    out.push_back(record("structure-irreducible-implies-weak", "irreducible implies weakly irreducible",
                         irr && !wirr ? -1.0 : 0.0, 0.0));
    if (s.indecomposable) {
        out.push_back(record("structure-indecomposable-implies-weak", "indecomposable implies weakly indecomposable",
                             s.indecomposable->holds && !s.weakly_indecomposable.holds ? -1.0 : 0.0, 0.0));
    } else {
        out.push_back(not_applicable("structure-indecomposable-implies-weak",
                                     "indecomposable implies weakly indecomposable",
                                     "vertex count above the enumeration cap"));
    }
    if (s.weakly_irreducible) {
        Vector y = random_positive_vector(rng, t.n(), 0.1, 10.0);
        const bool scaled = weak_irreducibility(diag_scale(y, t)).holds;
        out.push_back(record("structure-scaling-invariance", "weak irreducibility is invariant under diagonal scaling",
                             scaled == wirr ? 0.0 : -1.0, 0.0));
    }
}

void perron_suite(const DenseTensor& t, Rng& rng, std::vector<CheckRecord>& out) {
    const std::size_t n = t.n(), d = t.order();
    const EigenCertificate cert = spectral_radius(t);
    const double rho = cert.rho;
    {
        const double gap = (cert.cw_upper - cert.cw_lower) / std::max(cert.cw_upper, 1e-300);
        CheckRecord c = record("perron-cw-sandwich", "Collatz-Wielandt characterization of the spectral radius",
                               std::min(1e-10 - gap, 1e-10 * scale(rho) - cert.residual), 0.0,
                               "gap=" + std::to_string(gap));
        if (cert.regularized) {
            c.status = Status::inconclusive;
            c.detail += "; regularized (not weakly irreducible)";
        }
        if (cert.u.size() == 0) c = not_applicable(c.id, c.reference, "zero tensor");
        out.push_back(c);
    }
    if (rho == 0.0) return;
    {
        const double c = 2.5;
        const double r2 = spectral_radius(t.scaled(c)).rho;
        out.push_back(record("perron-scale-equivariance", "spectral radius is positively homogeneous",
                             1e-10 * scale(c * rho) - std::abs(r2 - c * rho), 0.0));
    }
    {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const double rp = spectral_radius(permute_labels(t, perm)).rho;
        out.push_back(record("perron-permutation-equivariance", "spectral radius is invariant under relabeling",
                             1e-10 * scale(rho) - std::abs(rp - rho), 0.0));
    }
    guarded(out, "perron-perturbation", "first-order perturbation of the spectral radius", [&](auto& o) {
        const DenseTensor s = random_mask(t, rng);
        const double coef = perturbation_coefficient(t, s, cert);
        const double h = 1e-5;
        const double fd = (spectral_radius(add(t, s, h)).rho - spectral_radius(add(t, s, -h)).rho) / (2 * h);
        o.push_back(record("perron-perturbation", "first-order perturbation of the spectral radius",
                           1e-3 * rho - std::abs(fd - coef), 0.0,
                           "coefficient=" + std::to_string(coef) + " fd=" + std::to_string(fd)));
    });
    guarded(out, "perron-monotonicity", "spectral radius is monotone in the entries",
            [&](auto& o) { o.push_back(monotonicity_check(random_mask(t, rng), t)); });
    guarded(out, "perron-kingman", "Kingman log-convexity of the spectral radius", [&](auto& o) {
        const DenseTensor g = random_positive_tensor(rng, n, d);
        for (const auto& [alpha, tag] : {std::pair{0.25, "25"}, std::pair{0.5, "50"}, std::pair{0.75, "75"}}) {
            CheckRecord c = kingman_check(t, g, alpha);
            c.id += std::string("-alpha") + tag;
            o.push_back(c);
        }
    });
    guarded(out, "perron-cohen-convexity", "convexity of the spectral radius in the diagonal entries", [&](auto& o) {
        Vector dir = random_positive_vector(rng, n, 0.0, 1.0);
        std::uniform_real_distribution<double> u(0.0, 2.0 * t.max_entry());
        o.push_back(cohen_midpoint_check(t, dir, u(rng), u(rng)));
    });
    guarded(out, "perron-friedland-karlin", "Friedland-Karlin inequality", [&](auto& o) {
        Vector y = random_positive_vector(rng, n, 0.1, 2.0);
        const FkReport r = friedland_karlin_check(t, y, cert);
        CheckRecord c = record("perron-friedland-karlin", "Friedland-Karlin inequality", r.margin, 0.0);
        c.status = r.pass ? Status::pass : Status::fail;
        c.tolerance = 1e-9 * scale(r.rhs);
        o.push_back(c);
    });
    guarded(out, "perron-min-characterization", "min characterization through u and w", [&](auto& o) {
        const MinCharReport r = fk_min_characterization(t, cert, 50, rng());
        CheckRecord c = record("perron-min-characterization", "min characterization through u and w", r.min_margin,
                               1e-9, "equality_error=" + std::to_string(r.equality_error));
        c.status = r.pass ? Status::pass : Status::fail;
        o.push_back(c);
    });
    guarded(out, "perron-kronecker", "spectral radius of Kronecker and Hadamard products", [&](auto& o) {
        const DenseTensor f = random_positive_tensor(rng, 2, d);
        const KroneckerReport r = kronecker_radius_check(t, f);
        CheckRecord c = record("perron-kronecker", "spectral radius of Kronecker and Hadamard products",
                               -r.product_gap, 1e-9 * scale(r.rho_e * r.rho_f));
        c.status = r.pass ? Status::pass : Status::fail;
        o.push_back(c);
        const DenseTensor g = random_positive_tensor(rng, n, d);
        const KroneckerReport h = kronecker_radius_check(t, g);
        if (h.hadamard_margin) {
            CheckRecord c2 = record("perron-hadamard", "spectral radius of a Hadamard product", *h.hadamard_margin,
                                    1e-9 * scale(h.rho_e * h.rho_f));
            o.push_back(c2);
        }
    });
    if (d % 2 == 0 && is_symmetric(t)) {
        guarded(out, "perron-convex-form", "sup characterization through the convex form", [&](auto& o) {
            const ConvexFormReport r = convex_form_sup_check(t, random_positive_vector(rng, n, 0.5, 2.0), 200, rng());
            CheckRecord c = record("perron-convex-form", "sup characterization through the convex form", r.margin,
                                   1e-9 * scale(r.bound), "convexity of x^T T(x) assumed, not verified");
            c.status = r.pass ? Status::pass : Status::fail;
            if (!r.pass && r.min_hessian_eig < -1e-12 * scale(r.bound)) {
                c.status = Status::inconclusive;
                c.detail = "x^T T(x) is not convex (negative Hessian eigenvalue found)";
            }
            o.push_back(c);
        });
    }
    guarded(out, "perron-diagonal-equivalence", "diagonal equivalence to a tensor with unit spectral radius",
            [&](auto& o) {
                Vector u = random_positive_vector(rng, n, 0.2, 1.0);
                Vector w = random_positive_vector(rng, n, 0.2, 1.0);
                w /= u.dot(w);
                const ScalingCertificate sc = diagonal_equivalence(t, u, w);
                const auto [r1, r2] = scaling_residuals(sc, u, w);
                const double rs = spectral_radius(sc.scaled).rho;
                o.push_back(record("perron-diagonal-equivalence",
                                   "diagonal equivalence to a tensor with unit spectral radius",
                                   1e-8 - std::max({r1, r2, std::abs(rs - 1.0)}), 0.0));
            });
}

void entropy_suite(const DenseTensor& t, Rng& rng, std::vector<CheckRecord>& out) {
    const EigenCertificate cert = spectral_radius(t);
    if (!cert.has_left_data()) {
        out.push_back(not_applicable("entropy-optimal-measure", "entropic characterization of log rho",
                                     "needs a weakly irreducible tensor with positive spectral radius"));
        return;
    }
    const double lr = std::log(cert.rho);
    const DenseTensor mu = optimal_tensor_measure(t, cert);
    const MeasureResiduals res = tensor_measure_residuals(mu);
    out.push_back(record("entropy-optimal-balance", "optimal occupation measure is feasible",
                         1e-10 - std::max({res.mass_error, res.balance_error, -res.min_entry}), 0.0));
    const ExtendedReal obj = tensor_entropy_objective(t, mu);
    out.push_back(record("entropy-optimal-objective", "entropic characterization of log rho",
                         obj.is_finite() ? 1e-9 - std::abs(obj.value() - lr) : -1.0, 0.0));
    if (t.order() == 2) {
        const ExtendedReal m = matrix_entropy_objective(t.to_matrix(), mu.to_matrix());
        const bool same = m.is_finite() == obj.is_finite() && (!m.is_finite() || m.value() == obj.value());
        out.push_back(record("entropy-matrix-consistency", "matrix specialization of the entropic characterization",
                             same ? 0.0 : -1.0, 0.0));
    }
    guarded(out, "entropy-random-upper", "entropic upper bound over feasible measures", [&](auto& o) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 200; ++k) {
            const ExtendedReal v = tensor_entropy_objective(t, random_feasible_measure(t, rng));
            if (v.is_finite()) worst = std::max(worst, v.value() - lr);
        }
        o.push_back(record("entropy-random-upper", "entropic upper bound over feasible measures",
                           std::isfinite(worst) ? -worst : 0.0, 1e-9, "200 measures"));
    });
    guarded(out, "entropy-donsker-varadhan", "Donsker-Varadhan characterization", [&](auto& o) {
        Vector p = cert.u.cwiseProduct(cert.w);
        p /= p.sum();
        const ExtendedReal dv = donsker_varadhan(t, p, &cert);
        o.push_back(record("entropy-donsker-varadhan", "Donsker-Varadhan characterization",
                           dv.is_finite() ? 1e-5 - std::abs(dv.value() - lr) : -1.0, 0.0, "p = u.w"));
        const double dve = donsker_varadhan_exp(t, p, &cert);
        o.push_back(record("entropy-donsker-varadhan-exp", "Donsker-Varadhan characterization, exponential form",
                           1e-5 * scale(cert.rho) - std::abs(dve - cert.rho), 0.0, "p = u.w"));
        double worst = -std::numeric_limits<double>::infinity(), worst_exp = worst;
        for (int k = 0; k < 20; ++k) {
            const Vector q = random_simplex_point(rng, t.n());
            const ExtendedReal v = donsker_varadhan(t, q, &cert);
            if (v.is_finite()) worst = std::max(worst, v.value() - lr);
            worst_exp = std::max(worst_exp, donsker_varadhan_exp(t, q, &cert) - cert.rho);
        }
        o.push_back(record("entropy-donsker-varadhan-upper", "Donsker-Varadhan upper bound",
                           std::isfinite(worst) ? -worst : 0.0, 1e-6, "20 random p"));
        o.push_back(record("entropy-donsker-varadhan-exp-upper", "Donsker-Varadhan upper bound, exponential form",
                           -worst_exp, 1e-6, "20 random p"));
    });
}

void tropical_suite(const DenseTensor& t, Rng& rng, std::vector<CheckRecord>& out) {
    const SparseSupportTensor s = sparse_from_dense(t);
    if (s.entries().empty()) {
        out.push_back(not_applicable("tropical-agreement", "tropical eigenvalue by three methods", "zero tensor"));
        return;
    }
    const TropicalEigenPair pol = tropical_eigenpair_policy(s);
    {
        std::vector<std::pair<std::string, double>> vals = {{"policy", pol.log_rho_trop}};
        std::string detail;
        if (weak_irreducibility(t).holds) {
            vals.push_back({"km", tropical_eigenpair_km(s).log_rho_trop});
        } else {
            detail += "km skipped (not weakly irreducible); ";
        }
        if (policy_count(s) <= 100000) {
            vals.push_back({"cycles", tropical_radius_by_cycles(s).log_rho_trop});
        } else {
            detail += "cycles skipped (policy count above 1e5); ";
        }
        double spread = 0.0;
        for (auto& [name, v] : vals) spread = std::max(spread, std::abs(std::expm1(v - pol.log_rho_trop)));
        detail += "rho_trop=" + std::to_string(pol.rho_trop);
        out.push_back(record("tropical-agreement", "tropical eigenvalue by three methods", 1e-9 - spread, 0.0, detail));
    }
    out.push_back(record("tropical-eigen-residual", "tropical eigen-equation", 1e-9 - tropical_eigen_residual(s, pol),
                         0.0));
    guarded(out, "tropical-karlin-ost", "Karlin-Ost monotonicity of rho(T^s)^(1/s)", [&](auto& o) {
        const RhoInfinity ri = rho_infinity(t);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < ri.trace.size(); ++k)
            worst = std::min(worst, ri.trace[k - 1].second - ri.trace[k].second);
        CheckRecord c = record("tropical-karlin-ost", "Karlin-Ost monotonicity of rho(T^s)^(1/s)", worst,
                               1e-9 * scale(ri.trace.front().second));
        if (ri.regularized) c.detail = "regularized solves";
        o.push_back(c);
        CheckRecord l = record("tropical-rho-infinity-limit", "rho(T^s)^(1/s) tends to rho_trop",
                               1e-3 - std::abs(ri.value - pol.rho_trop), 0.0,
                               "s=256 value=" + std::to_string(ri.value));
        // rho(T^s)^(1/s) >= rho_trop for every s; above the gate it is only slow, below it is wrong
        if (l.status == Status::fail && ri.value >= pol.rho_trop * (1 - 1e-9)) {
            l.status = Status::inconclusive;
            l.detail += ", above rho_trop by more than the 1e-3 gate";
        }
        o.push_back(l);
    });
    guarded(out, "tropical-lp-primal", "linear programming characterization of log rho_trop", [&](auto& o) {
        const EmittedLp lp = emit_lp(s);
        const LpCheck p = verify_lp(lp.primal, primal_point(pol));
        CheckRecord c = record("tropical-lp-primal", "linear programming characterization of log rho_trop",
                               -p.max_violation, 1e-8);
        o.push_back(c);
        const LpCheck q = verify_lp(lp.dual, dual_point(s, policy_occupation(s, pol)));
        o.push_back(record("tropical-lp-dual", "dual occupation measure attains the primal value",
                           std::min(-q.max_violation, -std::abs(q.objective - p.objective)), 1e-8));
    });
    guarded(out, "tropical-bounds", "bounds through the tropical spectral radius", [&](auto& o) {
        const DenseTensor other = random_positive_tensor(rng, t.n(), t.order());
        const TropicalBoundsReport r = tropical_bounds_check(other, t);
        CheckRecord c = record("tropical-bounds", "bounds through the tropical spectral radius",
                               std::min(r.hadamard_margin, r.pattern_margin), 1e-9 * scale(r.rho_t * r.rho_trop_e));
        c.status = r.pass ? Status::pass : Status::fail;
        o.push_back(c);
    });
}

void norm_suite(const DenseTensor& t, Rng& rng, std::vector<CheckRecord>& out) {
    NormOptions opt;
    opt.seed = rng();
    if (t.shape().equidimensional() && t.partially_symmetric()) out.push_back(norm_radius_bound_check(t, opt));
    {
        const double c = 3.0;
        const double a = spectral_norm(t, opt).value, b = spectral_norm(t.scaled(c), opt).value;
        out.push_back(record("norm-homogeneity", "spectral norm is absolutely homogeneous",
                             1e-10 * scale(c * a) - std::abs(b - c * a), 0.0));
    }
    NormSuiteParams p;
    p.seed = rng();
    p.norm = opt;
    const DenseTensor other = random_general_tensor(rng, t.shape().dims());
    for (CheckRecord& c : norm_inequality_suite(t, other, p)) out.push_back(std::move(c));
}

}  // namespace

AuditReport run_audit(const DenseTensor& input, const std::string& suite, std::uint64_t seed) {
    if (std::find(audit_suites().begin(), audit_suites().end(), suite) == audit_suites().end())
        throw DomainError("unknown suite '" + suite + "'");
    for (double v : input.values())
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("audit needs a finite nonnegative tensor");
    const bool equi = input.shape().equidimensional();
    DenseTensor t = equi && !is_tail_symmetric(input) ? symmetrize_tail(input) : input;

    AuditReport r;
    r.suite = suite;
    r.seed = seed;
    r.version = kVersion;
    r.input_digest = tensor_digest(input);
    const bool all = suite == "all";
    auto run = [&](const std::string& name, std::uint64_t salt, auto&& fn) {
        if (!all && suite != name) return;
        Rng rng(seed * 1000003ULL + salt);
        fn(t, rng, r.checks);
    };
    auto need_equi = [&](const std::string& name, auto&& fn) {
        return [&, name](const DenseTensor& x, Rng& rng, std::vector<CheckRecord>& out) {
            if (!equi) {
                if (!all) throw ShapeError("suite '" + name + "' needs an equidimensional tensor");
                return;
            }
            fn(x, rng, out);
        };
    };
    run("structure", 1, need_equi("structure", structure_suite));
    run("perron", 2, need_equi("perron", perron_suite));
    run("entropy", 3, need_equi("entropy", entropy_suite));
    run("tropical", 4, need_equi("tropical", tropical_suite));
    run("norms", 5, norm_suite);
    return r;
}

nlohmann::json to_json(const AuditReport& r) {
    using nlohmann::json;
    json checks = json::array();
    std::size_t counts[3] = {0, 0, 0};
    for (const CheckRecord& c : r.checks) {
        json j = {{"id", c.id},
                  {"reference", c.reference},
                  {"status", status_name(c.status)},
                  {"margin", std::isfinite(c.margin) ? json(c.margin) : json(nullptr)},
                  {"tolerance", c.tolerance},
                  {"inputs", r.input_digest + ":" + std::to_string(r.seed)}};
        if (!c.bound.empty()) j["bound"] = c.bound;
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
        ++counts[static_cast<int>(c.status)];
    }
    return {{"suite", r.suite},
            {"seed", r.seed},
            {"version", r.version},
            {"input_digest", r.input_digest},
            {"summary", {{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}}},
            {"checks", checks}};
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s = {"structure", "spectral", "perturb", "scale", "entropy",
                                               "tropical",  "norm",     "audit",   "gen"};
    return s;
}

const std::vector<OperationRoute>& operation_registry() {
    static const std::vector<OperationRoute> r = {
        {"tensor-core", "validate", "structure"},
        {"tensor-core", "symmetrize_tail", "gen"},
        {"tensor-core", "apply", "spectral"},
        {"tensor-core", "differential", "scale"},
        {"tensor-core", "hadamard", "audit"},
        {"tensor-core", "hadamard_power", "audit"},
        {"tensor-core", "kronecker", "audit"},
        {"tensor-core", "pattern", "audit"},
        {"tensor-core", "diag_scale", "audit"},
        {"tensor-core", "dense_from_sparse", "tropical"},
        {"tensor-core", "sparse_from_dense", "gen"},
        {"structure-analysis", "weak_irreducibility", "structure"},
        {"structure-analysis", "irreducibility", "structure"},
        {"structure-analysis", "weak_indecomposability", "structure"},
        {"structure-analysis", "indecomposability", "structure"},
        {"perron-solver", "spectral_radius", "spectral"},
        {"perron-solver", "collatz_wielandt", "spectral"},
        {"perron-solver", "left_data", "spectral"},
        {"perron-solver", "perturbation_coefficient", "perturb"},
        {"perron-solver", "kronecker_radius_check", "audit"},
        {"perron-solver", "diagonal_equivalence", "scale"},
        {"perron-solver", "friedland_karlin_check", "audit"},
        {"perron-solver", "fk_min_characterization", "audit"},
        {"perron-solver", "convex_form_ratio", "audit"},
        {"perron-solver", "kingman_check", "audit"},
        {"perron-solver", "cohen_midpoint_check", "audit"},
        {"perron-solver", "monotonicity_check", "audit"},
        {"entropy-certificates", "cycle_measure", "entropy"},
        {"entropy-certificates", "extreme_point_decompose", "entropy"},
        {"entropy-certificates", "psi_map", "entropy"},
        {"entropy-certificates", "phi_map", "entropy"},
        {"entropy-certificates", "matrix_entropy_objective", "entropy"},
        {"entropy-certificates", "tensor_entropy_objective", "entropy"},
        {"entropy-certificates", "optimal_tensor_measure", "entropy"},
        {"entropy-certificates", "donsker_varadhan", "entropy"},
        {"entropy-certificates", "donsker_varadhan_exp", "entropy"},
        {"entropy-certificates", "random_feasible_measure", "audit"},
        {"tropical-solver", "tropical_apply", "tropical"},
        {"tropical-solver", "tropical_eigenpair_km", "tropical"},
        {"tropical-solver", "tropical_eigenpair_policy", "tropical"},
        {"tropical-solver", "enumerate_k_cycles", "tropical"},
        {"tropical-solver", "cycle_weight", "tropical"},
        {"tropical-solver", "tropical_radius_by_cycles", "tropical"},
        {"tropical-solver", "emit_lp", "tropical"},
        {"tropical-solver", "rho_infinity", "tropical"},
        {"tropical-solver", "tropical_bounds_check", "audit"},
        {"norm-inequalities", "spectral_norm", "norm"},
        {"norm-inequalities", "norm_radius_bound_check", "norm"},
        {"norm-inequalities", "norm_inequality_suite", "audit"},
        {"cli", "random_tensor", "gen"},
    };
    return r;
}

namespace {

void render(const nlohmann::json& j, const std::string& indent, std::ostringstream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_structured()) {
                os << indent << it.key() << ":\n";
                render(*it, indent + "  ", os);
            } else {
                os << indent << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
            }
        }
    } else if (j.is_array()) {
        const bool flat = std::none_of(j.begin(), j.end(), [](const nlohmann::json& e) { return e.is_structured(); });
        if (flat) {
            os << indent << j.dump() << "\n";
            return;
        }
        std::size_t k = 0;
        for (const auto& e : j) {
            os << indent << "- [" << ++k << "]\n";
            render(e, indent + "  ", os);
        }
    } else {
        os << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

std::string render_pretty(const nlohmann::json& j) {
    // audit reports get a one-line-per-check table
    if (j.is_object() && j.contains("checks") && j.contains("suite")) {
        std::ostringstream os;
        os << "suite " << j["suite"].get<std::string>() << "  seed " << j["seed"].dump() << "  version "
           << j["version"].get<std::string>() << "  input " << j["input_digest"].get<std::string>() << "\n";
        for (const auto& c : j["checks"]) {
            std::string st = c["status"].get<std::string>();
            std::string id = c["id"].get<std::string>();
            os << "  " << st << std::string(st.size() < 13 ? 13 - st.size() : 1, ' ') << id
               << std::string(id.size() < 40 ? 40 - id.size() : 1, ' ') << "margin " << c["margin"].dump();
            if (c.contains("bound")) os << "  [" << c["bound"].get<std::string>() << "]";
            os << "\n";
        }
        os << "summary: " << j["summary"]["pass"].dump() << " pass, " << j["summary"]["fail"].dump() << " fail, "
           << j["summary"]["inconclusive"].dump() << " inconclusive\n";
        return os.str();
    }
    std::ostringstream os;
    render(j, "", os);
    return os.str();
}

}  // namespace tenspec
