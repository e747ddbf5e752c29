#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tenspec/check.hpp"
#include "tenspec/tensor.hpp"

namespace tenspec {

struct AuditReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::string version;
    std::string input_digest;
    std::vector<CheckRecord> checks;

    bool any_fail() const;
};

const std::vector<std::string>& audit_suites();  // perron, entropy, tropical, norms, structure, all
AuditReport run_audit(const DenseTensor& t, const std::string& suite, std::uint64_t seed);
nlohmann::json to_json(const AuditReport& r);

// FNV-1a over the canonical JSON of the tensor
std::string tensor_digest(const DenseTensor& t);

// which subcommand reaches each public operation
struct OperationRoute {
    std::string module;
    std::string operation;
    std::string subcommand;
};
const std::vector<OperationRoute>& operation_registry();
const std::vector<std::string>& subcommands();

// indented key/value rendering for --pretty
std::string render_pretty(const nlohmann::json& j);

}  // namespace tenspec
