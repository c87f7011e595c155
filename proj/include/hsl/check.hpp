#pragma once

#include <map>
#include <optional>
#include <string>

namespace hsl {

enum class Status { Pass, Fail, Skipped, Exploratory };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skipped: return "skipped";
        case Status::Exploratory: return "exploratory";
    }
    return "unknown";
}

// Counterexample data attached to failing checks: a rational evaluation
// point together with the two side values that disagree there.
struct Witness {
    std::map<std::string, std::string> point;
    std::string lhs;
    std::string rhs;
    std::string note;
};

struct CheckParams {
    int n = 0;
    int k = 0;
    std::optional<int> m;
};

struct CheckResult {
    std::string suite;
    std::string name;
    CheckParams params;
    Status status = Status::Pass;
    long terms = 0;
    long elapsed_ms = 0;
    std::optional<Witness> witness;
};

} // namespace hsl
