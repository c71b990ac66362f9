#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "confweave/model.hpp"

namespace confweave {

// A total solution of the model: one code per component variable, one
// 0/1 value per auxiliary bit and per channelling variable.
struct Assignment {
    std::vector<int> componentValues;            // by var index
    std::vector<std::vector<uint8_t>> propBits;  // [var][property index]
    std::vector<std::vector<uint8_t>> provBits;  // [var][facility index]
    std::vector<uint8_t> channels;               // by channel index

    bool operator==(const Assignment&) const = default;
};

// Projection onto the active component choices: path -> implementation
// name. Inactive (sentinel-0) variables and all bits are dropped.
using Configuration = std::map<std::string, std::string>;

Configuration project(const ConfigCsp& csp, const Assignment& a);

// Evaluates every constraint directly on a total assignment, without any
// propagation machinery. Throws MalformedAssignmentError when sizes do
// not match the model.
bool check_assignment(const ConfigCsp& csp, const Assignment& a);

// Chronological backtracking search over the component variables with
// per-constraint propagation to fixpoint. One instance owns its mutable
// state; the ConfigCsp it reads is shared and immutable.
class Solver {
public:
    explicit Solver(const ConfigCsp& csp, bool dynamicOrder = false);
    ~Solver();
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;

    // Restricts a component variable at the root, before any search.
    // Returns false if the domain wipes out.
    bool assume(int var, int code);

    // Runs root propagation (idempotent). False means the model is
    // inconsistent without any search.
    bool root_consistent();

    // Next solution, or nullopt when the search space is exhausted.
    // After exhaustion the internal state is back at the root fixpoint.
    std::optional<Assignment> next();

    // Current domain of a component variable, ascending.
    std::vector<int> domain_values(int var) const;

    struct ConflictInfo {
        int constraint = -1;
        std::string origin;
        std::string guardChain;
    };
    const std::optional<ConflictInfo>& last_conflict() const;

    struct Stats {
        long nodes = 0;
        long fails = 0;
        long solutions = 0;
    };
    const Stats& stats() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SolveResult {
    bool sat = false;
    Configuration configuration;
    Assignment assignment;
};

// First solution under the model's search order, or Unsat.
SolveResult solve_first(const ConfigCsp& csp, bool dynamicOrder = false);

// All distinct configurations in search order, truncated at limit.
std::vector<Configuration> solve_all(const ConfigCsp& csp, std::optional<long> limit = {},
                                     bool dynamicOrder = false);

// Component-variable domains after propagating the root to fixpoint;
// nullopt when the root is already inconsistent.
std::optional<std::vector<std::vector<int>>> propagate_root(const ConfigCsp& csp);

} // namespace confweave
