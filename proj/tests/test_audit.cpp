#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "tenspec/audit.hpp"
#include "tenspec/errors.hpp"
#include "tenspec/io.hpp"
#include "tenspec/random.hpp"
#include "tenspec/version.hpp"

using namespace tenspec;

TEST_CASE("operation registry") {
    const auto& reg = operation_registry();
    const std::set<std::string> subs(subcommands().begin(), subcommands().end());
    CHECK(subs == std::set<std::string>{"structure", "spectral", "perturb", "scale", "entropy", "tropical", "norm",
                                        "audit", "gen"});
    std::map<std::string, int> seen;
    std::set<std::string> used;
    for (const OperationRoute& r : reg) {
        ++seen[r.module + "/" + r.operation];
        CHECK_MESSAGE(subs.count(r.subcommand) == 1, r.operation, " -> ", r.subcommand);
        used.insert(r.subcommand);
    }
    for (const auto& [op, count] : seen) CHECK_MESSAGE(count == 1, op);
    // every subcommand is used by something
    CHECK(used == subs);
    std::set<std::string> modules;
    for (const OperationRoute& r : reg) modules.insert(r.module);
    CHECK(modules == std::set<std::string>{"tensor-core", "structure-analysis", "perron-solver",
                                           "entropy-certificates", "tropical-solver", "norm-inequalities", "cli"});
    // a few that must be present
    for (const char* op : {"spectral_radius", "diagonal_equivalence", "donsker_varadhan", "emit_lp", "rho_infinity",
                           "spectral_norm", "norm_inequality_suite", "weak_irreducibility", "phi_map"})
        CHECK_MESSAGE(std::any_of(reg.begin(), reg.end(), [&](const OperationRoute& r) { return r.operation == op; }),
                      op);
}

TEST_CASE("audit reports") {
    Rng rng(71);
    const DenseTensor t = random_tensor(rng, {3, 3, 1.0, true});
    for (const std::string& suite : audit_suites()) {
        const AuditReport a = run_audit(t, suite, 42), b = run_audit(t, suite, 42);
        CHECK(to_json(a).dump() == to_json(b).dump());
        CHECK(a.version == kVersion);
        CHECK(a.input_digest == tensor_digest(t));
        CHECK_FALSE(a.checks.empty());
        CHECK_FALSE(a.any_fail());
        for (const CheckRecord& c : a.checks) {
            CHECK_MESSAGE(c.status != Status::fail, suite, " ", c.id, " ", c.detail);
            CHECK_FALSE(c.reference.empty());
            if (suite != "all") CHECK(c.id.rfind(suite == "norms" ? "norm" : suite, 0) == 0);
        }
        const auto j = to_json(a);
        CHECK(j["suite"] == suite);
        CHECK(j["seed"] == 42);
        for (const auto& rec : j["checks"]) {
            for (const char* k : {"id", "reference", "status", "margin", "tolerance", "inputs"}) CHECK(rec.contains(k));
            CHECK(rec["inputs"].get<std::string>() == a.input_digest + ":42");
        }
        CHECK(j["summary"]["pass"].get<int>() + j["summary"]["fail"].get<int>() +
                  j["summary"]["inconclusive"].get<int>() ==
              static_cast<int>(a.checks.size()));
    }
    // the seed changes the ensemble
    CHECK(to_json(run_audit(t, "perron", 1)).dump() != to_json(run_audit(t, "perron", 2)).dump());
    CHECK_THROWS(run_audit(t, "bogus", 1));
}

TEST_CASE("audit input handling") {
    Rng rng(72);
    // non partially symmetric input is symmetrized first
    const DenseTensor g = random_general_tensor(rng, {3, 3, 3}, 1.0);
    CHECK_FALSE(run_audit(g, "perron", 1).any_fail());
    // general shape: only shape-free suites under "all"
    const DenseTensor h = random_general_tensor(rng, {2, 3, 2}, 1.0);
    const AuditReport all = run_audit(h, "all", 1);
    CHECK_FALSE(all.any_fail());
    for (const CheckRecord& c : all.checks) CHECK(c.id.rfind("perron", 0) != 0);
    CHECK_THROWS_AS(run_audit(h, "perron", 1), ShapeError);
    // reducible input: hypothesis-dependent checks are inconclusive, never failed
    const AuditReport id = run_audit(DenseTensor::identity(3, 3), "all", 1);
    CHECK_FALSE(id.any_fail());
}

TEST_CASE("digest and pretty rendering") {
    const DenseTensor a = DenseTensor::ones(2, 3);
    CHECK(tensor_digest(a) == tensor_digest(DenseTensor::ones(2, 3)));
    CHECK(tensor_digest(a) != tensor_digest(a.scaled(2)));
    CHECK(tensor_digest(a).size() == 16);
    nlohmann::json j = {{"rho", 1.5}, {"u", {1, 2}}, {"nested", {{"k", "v"}}}};
    const std::string s = render_pretty(j);
    CHECK(s.find("rho") != std::string::npos);
    CHECK(s.find("1.5") != std::string::npos);
    CHECK(s.find("k") != std::string::npos);
}
