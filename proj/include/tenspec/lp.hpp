#pragma once

#include <map>
#include <string>
#include <vector>

#include "tenspec/tensor.hpp"
#include "tenspec/tropical.hpp"

namespace tenspec {

// Plain-text LP:
//   minimize|maximize
//    obj: <terms>
//   subject to
//    <name>: <terms> <= <rhs>
//   bounds
//    <var> free | <var> >= 0
//   end
// terms are "+ <coef> <var>" / "- <coef> <var>"; lines starting with '\' are comments
struct LinearProgram {
    struct Term {
        double coef;
        std::string var;
    };
    struct Row {
        std::string name;
        std::vector<Term> terms;
        double rhs = 0.0;
    };
    bool maximize = false;
    std::vector<Term> objective;
    std::vector<Row> rows;
    std::vector<std::string> free_vars;
    std::vector<std::string> nonneg_vars;
};

struct EmittedLp {
    LinearProgram primal;
    LinearProgram dual;
};

EmittedLp emit_lp(const SparseSupportTensor& t);
std::string lp_to_text(const LinearProgram& lp, const std::string& comment = "");
LinearProgram parse_lp(const std::string& text);
std::string dual_variable_name(const Index& idx);

struct LpCheck {
    double max_violation = 0.0;  // over constraints and bounds
    double objective = 0.0;
    bool feasible = false;
};
LpCheck verify_lp(const LinearProgram& lp, const std::map<std::string, double>& values, double tol = 1e-8);

// (lambda, u) = (log rho_trop, log v); v must be positive
std::map<std::string, double> primal_point(const TropicalEigenPair& p);
std::map<std::string, double> dual_point(const SparseSupportTensor& t, const std::vector<double>& mu);

}  // namespace tenspec
