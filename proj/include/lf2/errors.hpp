// Error taxonomy shared by all modules.
//
// Everything derives from lf2::error so callers can catch the whole family.
// insufficient_precision carries a hint of the precision that would have
// been needed; callers that own a refinement loop retry monotonically.

#pragma once

#include <stdexcept>
#include <string>

namespace lf2 {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct insufficient_precision : error {
    // `required` is a lower bound on the precision that would decide the
    // question; <= INT_MIN means "unknown, just more".
    int required;
    explicit insufficient_precision(const std::string& msg, int req = -0x7fffffff)
        : error("insufficient precision: " + msg), required(req) {}
};

struct negative_valuation : error {
    explicit negative_valuation(const std::string& msg)
        : error("negative valuation: " + msg) {}
};

struct division_by_zero : error {
    explicit division_by_zero(const std::string& msg)
        : error("division by zero: " + msg) {}
};

struct grid_too_large : error {
    explicit grid_too_large(const std::string& msg)
        : error("grid too large: " + msg) {}
};

struct not_simple_root : error {
    explicit not_simple_root(const std::string& msg)
        : error("not a simple root: " + msg) {}
};

struct root_budget_exceeded : error {
    explicit root_budget_exceeded(const std::string& msg)
        : error("root search budget exceeded: " + msg) {}
};

struct purely_inseparable_error : error {
    explicit purely_inseparable_error(const std::string& msg)
        : error("purely inseparable: " + msg) {}
};

struct not_contained : error {
    explicit not_contained(const std::string& msg)
        : error("image not contained in target: " + msg) {}
};

struct unsupported_fiber_structure : error {
    explicit unsupported_fiber_structure(const std::string& msg)
        : error("unsupported fiber structure: " + msg) {}
};

struct pattern_not_recognized : error {
    explicit pattern_not_recognized(const std::string& msg)
        : error("pattern not recognized: " + msg) {}
};

struct parse_error : error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : error("parse error at " + std::to_string(pos) + ": " + msg), position(pos) {}
};

struct unknown_scenario : error {
    explicit unknown_scenario(const std::string& msg)
        : error("unknown scenario: " + msg) {}
};

} // namespace lf2
