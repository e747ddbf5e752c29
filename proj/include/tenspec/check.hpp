#pragma once

#include <string>

namespace tenspec {

enum class Status { pass, fail, inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "inconclusive";
    }
}

// margin > 0 means the inequality holds with that much room
struct CheckRecord {
    std::string id;
    std::string reference;
    Status status = Status::pass;
    double margin = 0.0;
    double tolerance = 0.0;
    std::string bound;  // which norm bound was used, when relevant
    std::string detail;
};

inline Status status_from_margin(double margin, double tol) { return margin >= -tol ? Status::pass : Status::fail; }

}  // namespace tenspec
