#include "tenspec/lp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tenspec/errors.hpp"

namespace tenspec {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string terms_text(const std::vector<LinearProgram::Term>& ts) {
    std::string s;
    for (const auto& t : ts) {
        if (!s.empty()) s += ' ';
        s += (t.coef < 0 ? "- " : "+ ") + num(std::abs(t.coef)) + ' ' + t.var;
    }
    return s.empty() ? "+ 0 lambda" : s;
}

std::string uvar(std::size_t j) { return "u" + std::to_string(j + 1); }

}  // namespace

std::string dual_variable_name(const Index& idx) {
    std::string s = "mu";
    for (std::size_t i : idx) s += '_' + std::to_string(i + 1);
    return s;
}

EmittedLp emit_lp(const SparseSupportTensor& t) {
    const std::size_t n = t.n(), d = t.order();
    const double dm1 = static_cast<double>(d - 1);
    EmittedLp out;
    LinearProgram& P = out.primal;
    P.maximize = false;
    P.objective = {{1.0, "lambda"}};
    P.free_vars.push_back("lambda");
    for (std::size_t j = 0; j < n; ++j) P.free_vars.push_back(uvar(j));

    LinearProgram& D = out.dual;
    D.maximize = true;
    std::vector<std::vector<LinearProgram::Term>> balance(n);
    std::vector<LinearProgram::Term> mass;

    std::size_t c = 0;
    for (const SparseEntry& e : t.entries()) {
        if (!(e.value > 0.0)) throw DomainError("LP emission needs positive support values");
        const double lt = std::log(e.value);
        // log t + sum_{l>=2} u_{i_l} - (d-1) u_{i_1} - lambda <= 0
        std::vector<double> coef(n, 0.0);
        coef[e.idx[0]] -= dm1;
        for (std::size_t k = 1; k < d; ++k) coef[e.idx[k]] += 1.0;
        LinearProgram::Row row{"c" + std::to_string(++c), {}, -lt};
        for (std::size_t j = 0; j < n; ++j)
            if (coef[j] != 0.0) row.terms.push_back({coef[j], uvar(j)});
        row.terms.push_back({-1.0, "lambda"});
        P.rows.push_back(std::move(row));

        const std::string mv = dual_variable_name(e.idx);
        D.objective.push_back({lt, mv});
        D.nonneg_vars.push_back(mv);
        mass.push_back({1.0, mv});
        for (std::size_t j = 0; j < n; ++j) {
            const double b = -coef[j];  // (d-1)[i1=j] - #tail occurrences of j
            if (b != 0.0) balance[j].push_back({b, mv});
        }
    }
    auto negate = [](std::vector<LinearProgram::Term> ts) {
        for (auto& t : ts) t.coef = -t.coef;
        return ts;
    };
    D.rows.push_back({"mass_le", mass, 1.0});
    D.rows.push_back({"mass_ge", negate(mass), -1.0});
    for (std::size_t j = 0; j < n; ++j) {
        if (balance[j].empty()) continue;
        D.rows.push_back({"balance" + std::to_string(j + 1) + "_le", balance[j], 0.0});
        D.rows.push_back({"balance" + std::to_string(j + 1) + "_ge", negate(balance[j]), 0.0});
    }
    return out;
}

std::string lp_to_text(const LinearProgram& lp, const std::string& comment) {
    std::ostringstream os;
    if (!comment.empty()) os << "\\ " << comment << '\n';
    os << (lp.maximize ? "maximize" : "minimize") << '\n';
    os << " obj: " << terms_text(lp.objective) << '\n';
    os << "subject to\n";
    for (const auto& r : lp.rows) os << ' ' << r.name << ": " << terms_text(r.terms) << " <= " << num(r.rhs) << '\n';
    os << "bounds\n";
    for (const auto& v : lp.free_vars) os << ' ' << v << " free\n";
    for (const auto& v : lp.nonneg_vars) os << ' ' << v << " >= 0\n";
    os << "end\n";
    return os.str();
}

namespace {

std::vector<LinearProgram::Term> parse_terms(std::istringstream& is, const std::string& line, std::string* tail) {
    std::vector<LinearProgram::Term> out;
    std::string sign;
    while (is >> sign) {
        if (sign == "<=") {
            if (tail) is >> *tail;
            return out;
        }
        std::string coef, var;
        if ((sign != "+" && sign != "-") || !(is >> coef >> var)) throw ParseError("malformed LP terms: " + line);
        double c;
        try {
            c = std::stod(coef);
        } catch (const std::exception&) {
            throw ParseError("malformed LP coefficient: " + line);
        }
        out.push_back({sign == "-" ? -c : c, var});
    }
    if (tail) throw ParseError("LP constraint without '<=': " + line);
    return out;
}

}  // namespace

LinearProgram parse_lp(const std::string& text) {
    LinearProgram lp;
    std::istringstream in(text);
    std::string line;
    enum { start, objective, constraints, bounds, done } section = start;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '\\') continue;
        std::string s = line.substr(first);
        if (s == "minimize" || s == "maximize") {
            lp.maximize = s == "maximize";
            section = objective;
            continue;
        }
        if (s == "subject to") {
            section = constraints;
            continue;
        }
        if (s == "bounds") {
            section = bounds;
            continue;
        }
        if (s == "end") {
            section = done;
            break;
        }
        auto colon = s.find(':');
        if (section == objective) {
            if (colon == std::string::npos) throw ParseError("objective line needs a name: " + line);
            std::istringstream is(s.substr(colon + 1));
            lp.objective = parse_terms(is, line, nullptr);
        } else if (section == constraints) {
            if (colon == std::string::npos) throw ParseError("constraint line needs a name: " + line);
            LinearProgram::Row row;
            row.name = s.substr(0, colon);
            std::istringstream is(s.substr(colon + 1));
            std::string rhs;
            row.terms = parse_terms(is, line, &rhs);
            try {
                row.rhs = std::stod(rhs);
            } catch (const std::exception&) {
                throw ParseError("malformed right-hand side: " + line);
            }
            lp.rows.push_back(std::move(row));
        } else if (section == bounds) {
            std::istringstream is(s);
            std::string var, a, b;
            is >> var >> a;
            if (a == "free")
                lp.free_vars.push_back(var);
            else if (a == ">=" && (is >> b) && b == "0")
                lp.nonneg_vars.push_back(var);
            else
                throw ParseError("unsupported bound: " + line);
        } else {
            throw ParseError("content before the objective sense: " + line);
        }
    }
    if (section != done) throw ParseError("LP text must end with 'end'");
    return lp;
}

LpCheck verify_lp(const LinearProgram& lp, const std::map<std::string, double>& values, double tol) {
    auto val = [&](const std::string& v) {
        auto it = values.find(v);
        return it == values.end() ? 0.0 : it->second;
    };
    LpCheck c;
    for (const auto& t : lp.objective) c.objective += t.coef * val(t.var);
    for (const auto& r : lp.rows) {
        double lhs = 0.0;
        for (const auto& t : r.terms) lhs += t.coef * val(t.var);
        c.max_violation = std::max(c.max_violation, lhs - r.rhs);
    }
    for (const auto& v : lp.nonneg_vars) c.max_violation = std::max(c.max_violation, -val(v));
    c.feasible = c.max_violation <= tol;
    return c;
}

std::map<std::string, double> primal_point(const TropicalEigenPair& p) {
    std::map<std::string, double> m;
    m["lambda"] = p.log_rho_trop;
    for (Eigen::Index j = 0; j < p.v.size(); ++j) {
        if (!(p.v[j] > 0.0)) throw DomainError("primal point needs a positive tropical eigenvector");
        m[uvar(static_cast<std::size_t>(j))] = std::log(p.v[j]);
    }
    return m;
}

std::map<std::string, double> dual_point(const SparseSupportTensor& t, const std::vector<double>& mu) {
    if (mu.size() != t.entries().size()) throw ShapeError("one dual value per concise entry expected");
    std::map<std::string, double> m;
    for (std::size_t e = 0; e < mu.size(); ++e) m[dual_variable_name(t.entries()[e].idx)] = mu[e];
    return m;
}

}  // namespace tenspec
