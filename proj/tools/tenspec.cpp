#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tenspec/audit.hpp"
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

using nlohmann::json;
using namespace tenspec;

namespace {

json one_based(const std::vector<std::size_t>& v) {
    json a = json::array();
    for (std::size_t x : v) a.push_back(x + 1);
    return a;
}

json structure_json(const std::optional<StructureResult>& r) {
    if (!r) return nullptr;
    json j = {{"holds", r->holds}};
    if (r->witness) j["witness"] = one_based(*r->witness);
    return j;
}

LoadedTensor load(const std::string& path) {
    LoadedTensor t = load_tensor(path);
    if (t.dense.size() > 10000000) std::cerr << "warning: tensor has " << t.dense.size() << " entries\n";
    return t;
}

json certificate_json(const DenseTensor& t, const EigenCertificate& c) {
    json j = {{"rho", c.rho},
              {"cw_lower", c.cw_lower},
              {"cw_upper", c.cw_upper},
              {"iterations", c.iterations},
              {"residual", c.residual},
              {"regularized", c.regularized}};
    if (c.has_eigenvector()) {
        j["u"] = to_json(c.u);
        j["u_max"] = to_json(c.u_max);
        j["T_u"] = to_json(apply(t, c.u));
    }
    if (c.has_left_data()) {
        j["w"] = to_json(c.w);
        j["A"] = to_json(c.A);
    }
    return j;
}

json tropical_json(const SparseSupportTensor& s, const TropicalEigenPair& p) {
    json j = {{"method", method_name(p.method)},
              {"rho_trop", p.rho_trop},
              {"log_rho_trop", p.rho_trop > 0.0 ? json(p.log_rho_trop) : json(nullptr)},
              {"v", to_json(p.v)},
              {"T_v", to_json(tropical_apply(s, p.v))},
              {"residual", tropical_eigen_residual(s, p)},
              {"iterations", p.iterations}};
    if (p.optimal_policy) {
        json pol = json::array();
        for (const auto& c : p.optimal_policy->choice) {
            if (c)
                pol.push_back(one_based(s.entries()[*c].idx));
            else
                pol.push_back(nullptr);
        }
        j["policy"] = pol;
    }
    return j;
}

json measure_residuals_json(const MeasureResiduals& r) {
    return {{"mass_error", r.mass_error}, {"balance_error", r.balance_error}, {"min_entry", r.min_entry}};
}

json extended(const ExtendedReal& x) { return x.is_finite() ? json(x.value()) : json("-inf"); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot write " + path);
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perron, tropical and entropic spectral quantities of nonnegative tensors"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    bool pretty = false;
    std::uint64_t seed = 0;
    app.add_flag("--pretty", pretty, "render the JSON output as text");
    app.add_option("--seed", seed, "random seed (TENSPEC_SEED overrides)");

    std::string file, direction_file, measure_file, u_text, w_text, p_text, x_text, method = "all", lp_out,
        suite = "all", out_file, format = "dense";
    double tol = 1e-10;
    std::size_t max_iter = 100000, restarts = 16, n = 3, d = 3;
    double density = 1.0;
    bool optimal = false, show_rho_inf = false, show_cycles = false, json_flag = false, no_weak = false;

    auto* structure = app.add_subcommand("structure", "irreducibility and indecomposability report");
    structure->add_option("file", file)->required();

    auto* spectral = app.add_subcommand("spectral", "spectral radius with Collatz-Wielandt certificate");
    spectral->add_option("file", file)->required();
    spectral->add_option("--tol", tol);
    spectral->add_option("--max-iter", max_iter);
    spectral->add_option("--x", x_text, "also report Collatz-Wielandt bounds at this positive vector");
    spectral->add_flag("--json", json_flag, "JSON output (the default)");

    auto* perturb = app.add_subcommand("perturb", "first-order perturbation coefficient");
    perturb->add_option("file", file)->required();
    perturb->add_option("direction", direction_file)->required();

    auto* scale = app.add_subcommand("scale", "diagonal equivalence to given (u, w)");
    scale->add_option("file", file)->required();
    scale->add_option("--u", u_text)->required();
    scale->add_option("--w", w_text)->required();

    auto* entropy = app.add_subcommand("entropy", "entropic objectives and occupation measures");
    entropy->add_option("file", file)->required();
    entropy->add_option("--measure", measure_file);
    entropy->add_flag("--optimal", optimal);
    entropy->add_option("--p", p_text, "probability vector for the Donsker-Varadhan forms");

    auto* tropical = app.add_subcommand("tropical", "tropical spectral radius and eigenvector");
    tropical->add_option("file", file)->required();
    tropical->add_option("--method", method)->check(CLI::IsMember({"km", "policy", "cycles", "all"}));
    tropical->add_option("--emit-lp", lp_out, "write the primal LP here and the dual next to it");
    tropical->add_flag("--rho-inf", show_rho_inf, "trace of rho(T^s)^(1/s)");
    tropical->add_flag("--cycles", show_cycles, "list the k-cycles with their weights");

    auto* norm = app.add_subcommand("norm", "spectral norm (certified lower bound)");
    norm->add_option("file", file)->required();
    norm->add_option("--restarts", restarts);

    auto* audit = app.add_subcommand("audit", "run an inequality suite and report pass/fail per check");
    audit->add_option("file", file)->required();
    audit->add_option("--suite", suite)->check(CLI::IsMember(audit_suites()));

    auto* gen = app.add_subcommand("gen", "random tensor: uniform(0,1] entries, thinned, tail-symmetrized");
    gen->add_option("--n", n);
    gen->add_option("--d", d);
    gen->add_option("--density", density)->check(CLI::Range(0.0, 1.0));
    gen->add_flag("--no-weak", no_weak, "skip weak-irreducibility rejection");
    gen->add_option("--format", format)->check(CLI::IsMember({"dense", "sparse"}));
    gen->add_option("-o,--output", out_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (const char* env = std::getenv("TENSPEC_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: TENSPEC_SEED is not an unsigned integer\n";
            return 2;
        }
    }

    auto emit = [&](const json& j) {
        if (pretty)
            std::cout << render_pretty(j);
        else
            std::cout << j.dump(2) << "\n";
    };

    try {
        json out;
        int code = 0;
        if (*structure) {
            const LoadedTensor lt = load(file);
            json viol = json::array();
            for (const Violation& v : validate(lt.dense)) viol.push_back({{"idx", one_based(v.idx)}, {"rule", v.rule}});
            const StructureReport r = analyze_structure(lt.dense);
            out = {{"violations", viol},
                   {"weakly_irreducible", structure_json(r.weakly_irreducible)},
                   {"irreducible", structure_json(r.irreducible)},
                   {"weakly_indecomposable", structure_json(r.weakly_indecomposable)},
                   {"indecomposable", structure_json(r.indecomposable)}};
        } else if (*spectral) {
            const LoadedTensor lt = load(file);
            PerronOptions opt;
            opt.tol = tol;
            opt.max_iter = max_iter;
            const EigenCertificate c = spectral_radius(lt.dense, opt);
            out = certificate_json(lt.dense, c);
            if (!x_text.empty()) {
                const CwBounds b = collatz_wielandt(lt.dense, parse_vector(x_text));
                out["cw_at_x"] = {{"lower", b.lower}, {"upper", b.upper}};
            }
        } else if (*perturb) {
            const LoadedTensor lt = load(file);
            const LoadedTensor dir = load(direction_file);
            const EigenCertificate c = spectral_radius(lt.dense);
            out = {{"rho", c.rho}, {"coefficient", perturbation_coefficient(lt.dense, dir.dense, c)}};
        } else if (*scale) {
            const LoadedTensor lt = load(file);
            const Vector u = parse_vector(u_text), w = parse_vector(w_text);
            const ScalingCertificate sc = diagonal_equivalence(lt.dense, u, w);
            const auto [r1, r2] = scaling_residuals(sc, u, w);
            out = {{"b", to_json(sc.b)},
                   {"c", to_json(sc.c)},
                   {"scaled", to_json(sc.scaled)},
                   {"A", to_json(differential(sc.scaled, u))},
                   {"eigen_residual", r1},
                   {"left_residual", r2},
                   {"gradient_norm", sc.objective_gradient_norm},
                   {"iterations", sc.iterations}};
        } else if (*entropy) {
            const LoadedTensor lt = load(file);
            const DenseTensor& t = lt.dense;
            const EigenCertificate c = spectral_radius(t);
            out = {{"rho", c.rho}, {"log_rho", c.rho > 0.0 ? json(std::log(c.rho)) : json("-inf")}};
            std::optional<DenseTensor> mu;
            if (optimal) {
                mu = optimal_tensor_measure(t, c);
                out["optimal"] = {{"measure", to_json(*mu)},
                                  {"residuals", measure_residuals_json(tensor_measure_residuals(*mu))},
                                  {"objective", extended(tensor_entropy_objective(t, *mu))}};
            }
            if (!measure_file.empty()) {
                mu = load(measure_file).dense;
                out["measure"] = {{"residuals", measure_residuals_json(tensor_measure_residuals(*mu))},
                                  {"objective", extended(tensor_entropy_objective(t, *mu))}};
            }
            if (t.order() == 2) {
                const Matrix a = t.to_matrix();
                const PhiResult phi = phi_map(a);
                json m = {{"phi_unique", phi.unique}, {"phi_measures", json::array()}};
                for (const Matrix& x : phi.measures) m["phi_measures"].push_back(to_json(x));
                if (mu) {
                    const Matrix mm = mu->to_matrix();
                    m["objective"] = extended(matrix_entropy_objective(a, mm));
                    m["psi"] = to_json(psi_map(mm));
                    json dec = json::array();
                    Matrix back = Matrix::Zero(a.rows(), a.cols());
                    for (const CycleTerm& ct : extreme_point_decompose(mm)) {
                        dec.push_back({{"cycle", one_based(ct.cycle)}, {"weight", ct.weight}});
                        back += ct.weight * cycle_measure(ct.cycle, t.n());
                    }
                    m["decomposition"] = dec;
                    m["reassembly_error"] = (back - mm).cwiseAbs().maxCoeff();
                }
                out["matrix"] = m;
            }
            if (!p_text.empty()) {
                const Vector p = parse_vector(p_text);
                const EigenCertificate* cp = c.has_eigenvector() ? &c : nullptr;
                out["donsker_varadhan"] = extended(donsker_varadhan(t, p, cp));
                out["donsker_varadhan_exp"] = donsker_varadhan_exp(t, p, cp);
            }
        } else if (*tropical) {
            const LoadedTensor lt = load(file);
            const SparseSupportTensor s = lt.sparse ? *lt.sparse : sparse_from_dense(lt.dense);
            const DenseTensor t = lt.sparse ? dense_from_sparse(*lt.sparse) : lt.dense;
            json results = json::array();
            std::vector<double> logs;
            std::optional<TropicalEigenPair> policy_pair;
            if (method == "km" || method == "all") {
                const TropicalEigenPair p = tropical_eigenpair_km(s);
                results.push_back(tropical_json(s, p));
                logs.push_back(p.log_rho_trop);
            }
            if (method == "policy" || method == "all") {
                policy_pair = tropical_eigenpair_policy(s);
                results.push_back(tropical_json(s, *policy_pair));
                logs.push_back(policy_pair->log_rho_trop);
            }
            if (method == "cycles" || method == "all") {
                const TropicalEigenPair p = tropical_radius_by_cycles(s);
                results.push_back(tropical_json(s, p));
                logs.push_back(p.log_rho_trop);
            }
            out = {{"results", results}};
            if (logs.size() > 1) {
                double spread = 0.0;
                for (double v : logs) spread = std::max(spread, std::abs(std::expm1(v - logs.front())));
                out["agree"] = spread <= 1e-9;
                out["relative_spread"] = spread;
                if (spread > 1e-9) code = 1;
            }
            if (show_cycles) {
                json cyc = json::array();
                for (const KCycle& g : enumerate_k_cycles(s)) {
                    json arcs = json::array();
                    for (std::size_t a : g.actions) arcs.push_back(one_based(s.entries()[a].idx));
                    cyc.push_back({{"arcs", arcs}, {"u", to_json(g.u)}, {"weight", cycle_weight(g, s)}});
                }
                out["cycles"] = cyc;
            }
            if (show_rho_inf) {
                const RhoInfinity ri = rho_infinity(t);
                json tr = json::array();
                for (auto [sv, v] : ri.trace) tr.push_back({{"s", sv}, {"value", v}});
                out["rho_infinity"] = {{"value", ri.value}, {"trace", tr}, {"regularized", ri.regularized}};
            }
            if (!lp_out.empty()) {
                const EmittedLp lp = emit_lp(s);
                std::filesystem::path primal(lp_out);
                std::filesystem::path dual = primal;
                dual.replace_extension(".dual" + primal.extension().string());
                write_text(primal.string(), lp_to_text(lp.primal, "primal: minimize lambda"));
                write_text(dual.string(), lp_to_text(lp.dual, "dual: occupation measure"));
                json lpj = {{"primal_file", primal.string()}, {"dual_file", dual.string()}};
                if (!policy_pair) policy_pair = tropical_eigenpair_policy(s);
                if ((policy_pair->v.array() > 0.0).all()) {
                    const LpCheck pc = verify_lp(lp.primal, primal_point(*policy_pair));
                    const LpCheck dc = verify_lp(lp.dual, dual_point(s, policy_occupation(s, *policy_pair)));
                    lpj["primal_violation"] = pc.max_violation;
                    lpj["dual_violation"] = dc.max_violation;
                    lpj["primal_objective"] = pc.objective;
                    lpj["dual_objective"] = dc.objective;
                }
                out["lp"] = lpj;
            }
        } else if (*norm) {
            const LoadedTensor lt = load(file);
            NormOptions opt;
            opt.restarts = restarts;
            opt.seed = seed;
            const NormCertificate c = spectral_norm(lt.dense, opt);
            json maxi = json::array();
            for (const Vector& x : c.maximizers) maxi.push_back(to_json(x));
            out = {{"value", c.value},
                   {"is_lower_bound", c.is_lower_bound},
                   {"maximizers", maxi},
                   {"restarts", c.restarts},
                   {"agreeing_starts", c.agreeing_starts},
                   {"hilbert_schmidt", hilbert_schmidt(lt.dense)},
                   {"ell_inf", ell_inf(lt.dense)}};
            if (lt.dense.shape().equidimensional() && is_tail_symmetric(lt.dense)) {
                const CheckRecord r = norm_radius_bound_check(lt.dense, opt);
                out["radius_bound"] = {{"status", status_name(r.status)}, {"margin", r.margin}, {"bound", r.bound}};
                if (r.status == Status::fail) code = 1;
            }
        } else if (*audit) {
            const LoadedTensor lt = load(file);
            const AuditReport r = run_audit(lt.dense, suite, seed);
            out = to_json(r);
            if (r.any_fail()) code = 1;
        } else if (*gen) {
            Rng rng(seed);
            GenOptions g;
            g.n = n;
            g.d = d;
            g.density = density;
            g.weakly_irreducible = !no_weak;
            const DenseTensor t = random_tensor(rng, g);
            out = format == "sparse" ? to_json(sparse_from_dense(t)) : to_json(t);
            if (!out_file.empty()) {
                write_text(out_file, out.dump(2) + "\n");
                return 0;
            }
        }
        emit(out);
        return code;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (bounds [" << e.lower << ", " << e.upper << "] after "
                  << e.iterations << " iterations)\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
