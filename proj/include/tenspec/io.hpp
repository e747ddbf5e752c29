#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tenspec/tensor.hpp"

namespace tenspec {

struct LoadedTensor {
    DenseTensor dense;
    std::optional<SparseSupportTensor> sparse;  // set for "format": "sparse"
    bool symmetric_tail = false;
};

LoadedTensor tensor_from_json(const nlohmann::json& j);
LoadedTensor load_tensor(const std::string& path);
nlohmann::json parse_json_text(const std::string& text);

nlohmann::json to_json(const DenseTensor& t);
nlohmann::json to_json(const SparseSupportTensor& s);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
Vector vector_from_json(const nlohmann::json& j);
// "1,2,3" or a JSON array
Vector parse_vector(const std::string& text);

}  // namespace tenspec
