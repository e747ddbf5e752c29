#include "tenspec/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tenspec/errors.hpp"

namespace tenspec {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

std::size_t positive_int(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ParseError(std::string("field '") + name + "' must be a positive integer");
    return v.get<std::size_t>();
}

double number_at(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError("field '" + where + "' must be a number");
    return v.get<double>();
}

Index index_at(const json& v, std::size_t d, std::size_t n_or_zero, const std::vector<std::size_t>& dims,
               const std::string& where) {
    if (!v.is_array() || v.size() != d)
        throw ParseError("field '" + where + "' must be an array of " + std::to_string(d) + " indices");
    Index idx(d);
    for (std::size_t k = 0; k < d; ++k) {
        if (!v[k].is_number_integer()) throw ParseError("field '" + where + "' must hold integers");
        long long i = v[k].get<long long>();
        std::size_t bound = n_or_zero ? n_or_zero : dims[k];
        if (i < 1 || static_cast<std::size_t>(i) > bound)
            throw ParseError("field '" + where + "' index out of range 1.." + std::to_string(bound));
        idx[k] = static_cast<std::size_t>(i - 1);
    }
    return idx;
}

}  // namespace

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t byte = std::min<std::size_t>(e.byte, text.size());
        std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
        throw ParseError("malformed JSON at line " + std::to_string(line) + ": " + e.what());
    }
}

LoadedTensor tensor_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("tensor document must be a JSON object");
    const std::size_t n = positive_int(j, "n");
    const std::size_t d = positive_int(j, "d");
    if (d < 2) throw ParseError("field 'd' must be at least 2");
    std::string format = "dense";
    if (j.contains("format")) {
        if (!j["format"].is_string()) throw ParseError("field 'format' must be a string");
        format = j["format"].get<std::string>();
    }
    bool sym = false;
    if (j.contains("symmetric_tail")) {
        if (!j["symmetric_tail"].is_boolean()) throw ParseError("field 'symmetric_tail' must be a boolean");
        sym = j["symmetric_tail"].get<bool>();
    }

    if (format == "sparse") {
        const json& entries = field(j, "entries");
        if (!entries.is_array()) throw ParseError("field 'entries' must be an array");
        std::vector<SparseEntry> es;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const std::string where = "entries[" + std::to_string(e) + "]";
            Index idx = index_at(field(entries[e], "idx"), d, n, {}, where + ".idx");
            if (!std::is_sorted(idx.begin() + 1, idx.end()))
                throw ParseError("field '" + where + ".idx' must have a sorted tail in sparse format");
            double v = number_at(field(entries[e], "value"), where + ".value");
            if (!(v > 0.0)) throw ParseError("field '" + where + ".value' must be positive in sparse format");
            es.push_back({idx, v});
        }
        std::vector<Index> keys;
        for (auto& e : es) keys.push_back(e.idx);
        std::sort(keys.begin(), keys.end());
        if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
            throw ParseError("duplicate symmetry class in 'entries'");
        SparseSupportTensor s(n, d, std::move(es));
        DenseTensor t = dense_from_sparse(s);
        return LoadedTensor{t, s, true};
    }
    if (format != "dense") throw ParseError("field 'format' must be \"dense\" or \"sparse\"");

    std::vector<std::size_t> dims(d, n);
    if (j.contains("dims")) {
        const json& dj = j["dims"];
        if (!dj.is_array() || dj.size() != d) throw ParseError("field 'dims' must be an array of length d");
        for (std::size_t k = 0; k < d; ++k) {
            if (!dj[k].is_number_integer() || dj[k].get<long long>() < 1)
                throw ParseError("field 'dims' must hold positive integers");
            dims[k] = dj[k].get<std::size_t>();
        }
    }
    Shape shape(dims);
    const bool cube = shape.equidimensional() && dims[0] == n;
    std::vector<double> vals(shape.size(), 0.0);
    if (j.contains("values")) {
        const json& v = j["values"];
        if (!v.is_array() || v.size() != shape.size())
            throw ParseError("field 'values' must be an array of " + std::to_string(shape.size()) + " numbers");
        for (std::size_t k = 0; k < v.size(); ++k) vals[k] = number_at(v[k], "values[" + std::to_string(k) + "]");
    } else {
        const json& entries = field(j, "entries");
        if (!entries.is_array()) throw ParseError("field 'entries' must be an array");
        std::vector<bool> seen(shape.size(), false);
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const std::string where = "entries[" + std::to_string(e) + "]";
            Index idx = index_at(field(entries[e], "idx"), d, cube ? n : 0, dims, where + ".idx");
            std::size_t f = shape.flat(idx);
            if (seen[f]) throw ParseError("duplicate index in '" + where + "'");
            seen[f] = true;
            vals[f] = number_at(field(entries[e], "value"), where + ".value");
        }
    }
    return LoadedTensor{DenseTensor(shape, std::move(vals), sym), std::nullopt, sym};
}

LoadedTensor load_tensor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return tensor_from_json(parse_json_text(ss.str()));
}

json to_json(const DenseTensor& t) {
    json j;
    const Shape& s = t.shape();
    j["n"] = s.dim(0);
    j["d"] = s.order();
    if (!s.equidimensional()) j["dims"] = s.dims();
    j["format"] = "dense";
    j["symmetric_tail"] = t.partially_symmetric();
    j["values"] = t.values();
    return j;
}

json to_json(const SparseSupportTensor& s) {
    json j;
    j["n"] = s.n();
    j["d"] = s.order();
    j["format"] = "sparse";
    j["symmetric_tail"] = true;
    json entries = json::array();
    for (const SparseEntry& e : s.entries()) {
        std::vector<std::size_t> idx(e.idx);
        for (auto& i : idx) ++i;
        entries.push_back({{"idx", idx}, {"value", e.value}});
    }
    j["entries"] = entries;
    return j;
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Vector r = m.row(i).transpose();
        rows.push_back(to_json(r));
    }
    return rows;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("vector must be a JSON array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k)
        v[static_cast<Eigen::Index>(k)] = number_at(j[k], "vector[" + std::to_string(k) + "]");
    return v;
}

Vector parse_vector(const std::string& text) {
    auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '[') return vector_from_json(parse_json_text(text));
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("cannot parse vector component '" + item + "'");
        }
    }
    return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace tenspec
