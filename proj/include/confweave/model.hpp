#pragma once

#include <compare>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "confweave/ast.hpp"

namespace confweave {

// Implementations, properties and facilities mapped to small integers.
// Implementation codes start at 1; 0 is the reserved "inactive" sentinel
// assigned to conditional variables whose prerequisites fail. Property and
// facility indices are dense from 0. All orders are declaration order.
struct SymbolTable {
    static constexpr int kInactive = 0;

    std::vector<std::string> implementations; // code = index + 1
    std::vector<std::string> properties;      // index
    std::vector<std::string> facilities;      // index

    std::map<std::string, int> implCode;
    std::map<std::string, int> propertyIndex;
    std::map<std::string, int> facilityIndex;

    int code_of(const std::string& impl) const;         // -1 if absent
    const std::string& impl_name(int code) const;       // code >= 1
    int property_of(const std::string& name) const;     // -1 if absent
    int facility_of(const std::string& name) const;     // -1 if absent

    bool operator==(const SymbolTable& o) const;
};

// One literal of a prerequisite/guard conjunction: variable = code.
// Ordered so guards can key maps (channel allocation).
struct GuardLiteral {
    int var;  // index into ConfigCsp::vars
    int code; // implementation code
    auto operator<=>(const GuardLiteral&) const = default;
};
using Guard = std::vector<GuardLiteral>;

// Identifies one Boolean of a component variable's two auxiliary arrays.
struct BitRef {
    int var;
    SetKind array; // Properties or Provides
    int index;     // property/facility index
    bool operator==(const BitRef&) const = default;
};

// An integer variable choosing the implementation of one requirement
// path. Conditional variables carry a non-empty prerequisite and have 0
// in their domain; top-level ones do not.
struct ComponentVar {
    std::string path;      // e.g. "pvw" or "pvw=BooleanVariable/mem"
    std::string facility;  // facility the requirement asks for
    std::vector<int> domain; // ascending codes; contains 0 iff conditional
    Guard prerequisite;    // empty for top level
    int parent = -1;       // index of the owning variable, -1 at top level

    bool conditional() const { return !prerequisite.empty(); }
    bool operator==(const ComponentVar&) const = default;
};

// bit = 1  <=>  var is assigned one of `codes`.
struct IffMembership {
    BitRef bit;
    int var;
    std::vector<int> codes;
    bool operator==(const IffMembership&) const = default;
};

// Under `guard` (empty = always), `bit` is fixed to `value`.
struct ForceBit {
    BitRef bit;
    bool value = true;
    Guard guard;
    bool operator==(const ForceBit&) const = default;
};

// guard => every (bit = value) consequent. Produced by accepts checks.
struct GuardedImplication {
    Guard guard;
    std::vector<std::pair<BitRef, bool>> consequents;
    bool operator==(const GuardedImplication&) const = default;
};

// channel = 1  <=>  the guard conjunction holds.
struct ChannelReify {
    int channel;
    Guard guard;
    bool operator==(const ChannelReify&) const = default;
};

// channel = 1  =>  bit = value.
struct ChannelImply {
    int channel;
    BitRef bit;
    bool value = true;
    bool operator==(const ChannelImply&) const = default;
};

// var = 0  <=>  the prerequisite fails. Makes assignments total and
// enumeration duplicate-free.
struct SentinelLink {
    int var;
    Guard prerequisite;
    int channel; // channel reified to the prerequisite
    bool operator==(const SentinelLink&) const = default;
};

struct CspConstraint {
    std::variant<IffMembership, ForceBit, GuardedImplication, ChannelReify, ChannelImply,
                 SentinelLink>
        node;
    std::string origin; // human-readable provenance for conflict reports
    bool operator==(const CspConstraint&) const = default;
};

struct SearchOrder {
    std::vector<int> varOrder;                 // permutation of var indices
    std::vector<std::vector<int>> valueOrder;  // per var: full value order
    bool operator==(const SearchOrder&) const = default;
};

struct ConfigCsp {
    SymbolTable symbols;
    std::vector<ComponentVar> vars;
    int channelCount = 0;
    std::vector<CspConstraint> constraints;
    SearchOrder search;
    std::map<std::string, int> varIndex; // path -> index into vars

    int var_of(const std::string& path) const; // -1 if absent

    bool operator==(const ConfigCsp& o) const;
};

} // namespace confweave
