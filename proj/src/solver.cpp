#include "confweave/solver.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "confweave/errors.hpp"

namespace confweave {

Configuration project(const ConfigCsp& csp, const Assignment& a) {
    Configuration cfg;
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        int code = a.componentValues.at(v);
        if (code == SymbolTable::kInactive) continue;
        cfg[csp.vars[v].path] = csp.symbols.impl_name(code);
    }
    return cfg;
}

namespace {

bool guard_holds(const Guard& g, const std::vector<int>& componentValues) {
    return std::all_of(g.begin(), g.end(), [&](const GuardLiteral& l) {
        return componentValues[static_cast<size_t>(l.var)] == l.code;
    });
}

} // namespace

bool check_assignment(const ConfigCsp& csp, const Assignment& a) {
    size_t C = csp.vars.size();
    size_t P = csp.symbols.properties.size();
    size_t F = csp.symbols.facilities.size();
    if (a.componentValues.size() != C || a.propBits.size() != C || a.provBits.size() != C ||
        a.channels.size() != static_cast<size_t>(csp.channelCount))
        throw MalformedAssignmentError("assignment does not match the model's variable counts");
    for (size_t v = 0; v < C; ++v) {
        if (a.propBits[v].size() != P || a.provBits[v].size() != F)
            throw MalformedAssignmentError("auxiliary bit rows do not match the symbol table");
        const auto& dom = csp.vars[v].domain;
        if (!std::count(dom.begin(), dom.end(), a.componentValues[v]))
            throw MalformedAssignmentError("component value outside the domain of '" +
                                           csp.vars[v].path + "'");
        for (uint8_t b : a.propBits[v])
            if (b > 1) throw MalformedAssignmentError("auxiliary bit outside {0,1}");
        for (uint8_t b : a.provBits[v])
            if (b > 1) throw MalformedAssignmentError("auxiliary bit outside {0,1}");
    }
    for (uint8_t b : a.channels)
        if (b > 1) throw MalformedAssignmentError("channel value outside {0,1}");

    auto bitValue = [&](const BitRef& b) {
        return b.array == SetKind::Properties ? a.propBits[b.var][b.index]
                                              : a.provBits[b.var][b.index];
    };
    for (const auto& c : csp.constraints) {
        bool ok = true;
        if (const auto* m = std::get_if<IffMembership>(&c.node)) {
            bool member = std::binary_search(m->codes.begin(), m->codes.end(),
                                             a.componentValues[m->var]);
            ok = (bitValue(m->bit) == 1) == member;
        } else if (const auto* fb = std::get_if<ForceBit>(&c.node)) {
            ok = !guard_holds(fb->guard, a.componentValues) ||
                 bitValue(fb->bit) == (fb->value ? 1 : 0);
        } else if (const auto* gi = std::get_if<GuardedImplication>(&c.node)) {
            if (guard_holds(gi->guard, a.componentValues))
                for (const auto& [bit, value] : gi->consequents)
                    ok = ok && bitValue(bit) == (value ? 1 : 0);
        } else if (const auto* cr = std::get_if<ChannelReify>(&c.node)) {
            ok = (a.channels[cr->channel] == 1) == guard_holds(cr->guard, a.componentValues);
        } else if (const auto* ci = std::get_if<ChannelImply>(&c.node)) {
            ok = a.channels[ci->channel] == 0 || bitValue(ci->bit) == (ci->value ? 1 : 0);
        } else if (const auto* sl = std::get_if<SentinelLink>(&c.node)) {
            ok = (a.componentValues[sl->var] == SymbolTable::kInactive) ==
                 !guard_holds(sl->prerequisite, a.componentValues);
        }
        if (!ok) return false;
    }
    return true;
}

// Internal variable ids: component vars first, then per-var auxiliary
// bits (properties then provides), then channels. All domains live in one
// uniform bitmap-plus-count representation restored through a trail.
struct Solver::Impl {
    const ConfigCsp& csp;
    bool dynamicOrder;
    int C, P, F, K, N;
    int maxVal;

    std::vector<std::vector<uint8_t>> in; // [global id][value] -> present
    std::vector<int> count;
    std::vector<int> fixedValue; // -1 while more than one value remains
    std::vector<std::pair<int, int>> trail;

    std::vector<std::vector<int>> watchers; // global id -> constraint indices
    std::deque<int> queue;
    std::vector<uint8_t> inQueue;

    std::optional<ConflictInfo> conflict;
    Stats st;

    bool rootDone = false;
    bool rootOk = true;
    size_t rootMark = 0;

    struct Frame {
        int var;
        std::vector<int> values;
        size_t idx;
        size_t mark;
    };
    std::vector<Frame> frames;
    bool started = false;
    bool exhausted = false;

    Impl(const ConfigCsp& model, bool dyn) : csp(model), dynamicOrder(dyn) {
        C = static_cast<int>(csp.vars.size());
        P = static_cast<int>(csp.symbols.properties.size());
        F = static_cast<int>(csp.symbols.facilities.size());
        K = csp.channelCount;
        N = C + C * (P + F) + K;
        maxVal = std::max(1, static_cast<int>(csp.symbols.implementations.size()));

        in.assign(N, std::vector<uint8_t>(maxVal + 1, 0));
        count.assign(N, 0);
        fixedValue.assign(N, -1);
        for (int v = 0; v < C; ++v) {
            for (int code : csp.vars[v].domain) in[v][code] = 1;
            count[v] = static_cast<int>(csp.vars[v].domain.size());
            if (count[v] == 1) fixedValue[v] = csp.vars[v].domain[0];
        }
        for (int g = C; g < N; ++g) {
            in[g][0] = in[g][1] = 1;
            count[g] = 2;
        }

        watchers.assign(N, {});
        inQueue.assign(csp.constraints.size(), 0);
        for (size_t ci = 0; ci < csp.constraints.size(); ++ci) {
            auto watch = [&](int g) { watchers[g].push_back(static_cast<int>(ci)); };
            const auto& c = csp.constraints[ci];
            if (const auto* m = std::get_if<IffMembership>(&c.node)) {
                watch(bit_id(m->bit));
                watch(m->var);
            } else if (const auto* fb = std::get_if<ForceBit>(&c.node)) {
                watch(bit_id(fb->bit));
                for (const auto& l : fb->guard) watch(l.var);
            } else if (const auto* gi = std::get_if<GuardedImplication>(&c.node)) {
                for (const auto& l : gi->guard) watch(l.var);
                for (const auto& [bit, value] : gi->consequents) watch(bit_id(bit));
            } else if (const auto* cr = std::get_if<ChannelReify>(&c.node)) {
                watch(chan_id(cr->channel));
                for (const auto& l : cr->guard) watch(l.var);
            } else if (const auto* im = std::get_if<ChannelImply>(&c.node)) {
                watch(chan_id(im->channel));
                watch(bit_id(im->bit));
            } else if (const auto* sl = std::get_if<SentinelLink>(&c.node)) {
                watch(sl->var);
                for (const auto& l : sl->prerequisite) watch(l.var);
            }
        }
    }

    int bit_id(const BitRef& b) const {
        return C + b.var * (P + F) + (b.array == SetKind::Properties ? b.index : P + b.index);
    }
    int chan_id(int k) const { return C + C * (P + F) + k; }

    void touch(int g) {
        for (int ci : watchers[g])
            if (!inQueue[ci]) {
                inQueue[ci] = 1;
                queue.push_back(ci);
            }
    }

    bool remove(int g, int val) {
        if (!in[g][val]) return true;
        in[g][val] = 0;
        trail.push_back({g, val});
        if (--count[g] == 0) return false;
        if (count[g] == 1)
            for (int v = 0; v <= maxVal; ++v)
                if (in[g][v]) {
                    fixedValue[g] = v;
                    break;
                }
        touch(g);
        return true;
    }

    bool assign(int g, int val) {
        if (!in[g][val]) return false;
        for (int v = 0; v <= maxVal; ++v)
            if (v != val && in[g][v] && !remove(g, v)) return false;
        return true;
    }

    void undo_to(size_t mark) {
        while (trail.size() > mark) {
            auto [g, val] = trail.back();
            trail.pop_back();
            in[g][val] = 1;
            ++count[g];
            if (count[g] == 1)
                fixedValue[g] = val;
            else
                fixedValue[g] = -1;
        }
    }

    // Literal l: entailed when its var is fixed to the code, failed when
    // the code left the domain, undecided otherwise.
    bool guard_failed(const Guard& g) const {
        return std::any_of(g.begin(), g.end(),
                           [&](const GuardLiteral& l) { return !in[l.var][l.code]; });
    }
    bool guard_entailed(const Guard& g) const {
        return std::all_of(g.begin(), g.end(),
                           [&](const GuardLiteral& l) { return fixedValue[l.var] == l.code; });
    }

    // The guard must not become true. Precondition: not yet entailed is
    // NOT assumed; an entailed guard is a contradiction.
    bool force_guard_false(const Guard& g) {
        int undecided = -1, n = 0;
        for (size_t i = 0; i < g.size(); ++i) {
            if (!in[g[i].var][g[i].code]) return true; // already impossible
            if (fixedValue[g[i].var] != g[i].code) {
                ++n;
                undecided = static_cast<int>(i);
            }
        }
        if (n == 0) return false;
        if (n == 1) return remove(g[undecided].var, g[undecided].code);
        return true;
    }

    bool force_guard_true(const Guard& g) {
        for (const auto& l : g)
            if (!assign(l.var, l.code)) return false;
        return true;
    }

    bool prop_membership(const IffMembership& m) {
        int b = bit_id(m.bit);
        auto member = [&](int val) {
            return std::binary_search(m.codes.begin(), m.codes.end(), val);
        };
        if (fixedValue[b] == 1) {
            for (int val = 0; val <= maxVal; ++val)
                if (in[m.var][val] && !member(val) && !remove(m.var, val)) return false;
        } else if (fixedValue[b] == 0) {
            for (int code : m.codes)
                if (in[m.var][code] && !remove(m.var, code)) return false;
        }
        bool allIn = true, anyIn = false;
        for (int val = 0; val <= maxVal; ++val) {
            if (!in[m.var][val]) continue;
            if (member(val))
                anyIn = true;
            else
                allIn = false;
        }
        if (allIn && !assign(b, 1)) return false;
        if (!anyIn && !assign(b, 0)) return false;
        return true;
    }

    bool prop_force_bit(const ForceBit& fb) {
        int b = bit_id(fb.bit);
        int want = fb.value ? 1 : 0;
        if (fb.guard.empty()) return assign(b, want);
        if (guard_failed(fb.guard)) return true;
        if (guard_entailed(fb.guard)) return assign(b, want);
        if (fixedValue[b] == 1 - want) return force_guard_false(fb.guard);
        return true;
    }

    bool prop_implication(const GuardedImplication& gi) {
        if (guard_failed(gi.guard)) return true;
        if (guard_entailed(gi.guard)) {
            for (const auto& [bit, value] : gi.consequents)
                if (!assign(bit_id(bit), value ? 1 : 0)) return false;
            return true;
        }
        for (const auto& [bit, value] : gi.consequents)
            if (fixedValue[bit_id(bit)] == (value ? 0 : 1)) return force_guard_false(gi.guard);
        return true;
    }

    bool prop_reify(const ChannelReify& cr) {
        int ch = chan_id(cr.channel);
        if (fixedValue[ch] == 1) return force_guard_true(cr.guard);
        if (fixedValue[ch] == 0) return force_guard_false(cr.guard);
        if (guard_failed(cr.guard)) return assign(ch, 0);
        if (guard_entailed(cr.guard)) return assign(ch, 1);
        return true;
    }

    bool prop_imply(const ChannelImply& im) {
        int ch = chan_id(im.channel);
        int b = bit_id(im.bit);
        int want = im.value ? 1 : 0;
        if (fixedValue[ch] == 1) return assign(b, want);
        if (fixedValue[b] == 1 - want) return assign(ch, 0);
        return true;
    }

    bool prop_sentinel(const SentinelLink& sl) {
        if (guard_entailed(sl.prerequisite)) {
            if (in[sl.var][SymbolTable::kInactive] && !remove(sl.var, SymbolTable::kInactive))
                return false;
            return true;
        }
        if (guard_failed(sl.prerequisite)) return assign(sl.var, SymbolTable::kInactive);
        if (fixedValue[sl.var] == SymbolTable::kInactive)
            return force_guard_false(sl.prerequisite);
        if (!in[sl.var][SymbolTable::kInactive]) return force_guard_true(sl.prerequisite);
        return true;
    }

    bool run_propagator(int ci) {
        const auto& c = csp.constraints[ci];
        if (const auto* m = std::get_if<IffMembership>(&c.node)) return prop_membership(*m);
        if (const auto* fb = std::get_if<ForceBit>(&c.node)) return prop_force_bit(*fb);
        if (const auto* gi = std::get_if<GuardedImplication>(&c.node)) return prop_implication(*gi);
        if (const auto* cr = std::get_if<ChannelReify>(&c.node)) return prop_reify(*cr);
        if (const auto* im = std::get_if<ChannelImply>(&c.node)) return prop_imply(*im);
        return prop_sentinel(std::get<SentinelLink>(c.node));
    }

    std::string guard_text(const Guard& g) const {
        std::string out;
        for (const auto& l : g) {
            if (!out.empty()) out += " and ";
            out += csp.vars[l.var].path + "=" + csp.symbols.impl_name(l.code);
        }
        return out;
    }

    void record_conflict(int ci) {
        ConflictInfo info;
        info.constraint = ci;
        info.origin = csp.constraints[ci].origin;
        const auto& c = csp.constraints[ci];
        if (const auto* fb = std::get_if<ForceBit>(&c.node))
            info.guardChain = guard_text(fb->guard);
        else if (const auto* gi = std::get_if<GuardedImplication>(&c.node))
            info.guardChain = guard_text(gi->guard);
        else if (const auto* cr = std::get_if<ChannelReify>(&c.node))
            info.guardChain = guard_text(cr->guard);
        else if (const auto* sl = std::get_if<SentinelLink>(&c.node))
            info.guardChain = guard_text(sl->prerequisite);
        conflict = std::move(info);
    }

    bool propagate() {
        while (!queue.empty()) {
            int ci = queue.front();
            queue.pop_front();
            inQueue[ci] = 0;
            if (!run_propagator(ci)) {
                record_conflict(ci);
                while (!queue.empty()) {
                    inQueue[queue.front()] = 0;
                    queue.pop_front();
                }
                return false;
            }
        }
        return true;
    }

    void ensure_root() {
        if (rootDone) return;
        rootDone = true;
        for (int v = 0; v < C; ++v)
            if (count[v] == 0) {
                rootOk = false;
                conflict = ConflictInfo{-1, "empty domain of '" + csp.vars[v].path + "'", ""};
                return;
            }
        for (size_t ci = 0; ci < csp.constraints.size(); ++ci) {
            inQueue[ci] = 1;
            queue.push_back(static_cast<int>(ci));
        }
        rootOk = propagate();
        rootMark = trail.size();
    }

    bool assume(int var, int code) {
        ensure_root();
        if (!rootOk) return false;
        if (started) throw std::logic_error("assume() after search started");
        if (var < 0 || var >= C || code < 0 || code > maxVal || !in[var][code]) {
            rootOk = false;
            conflict = ConflictInfo{-1,
                                    "assumption outside the current domain of '" +
                                        (var >= 0 && var < C ? csp.vars[var].path
                                                             : std::to_string(var)) +
                                        "'",
                                    ""};
            return false;
        }
        if (!assign(var, code) || !propagate()) {
            rootOk = false;
            return false;
        }
        rootMark = trail.size();
        return true;
    }

    int select_var() {
        int best = -1;
        for (int v : csp.search.varOrder) {
            if (count[v] <= 1) continue;
            if (!dynamicOrder) return v;
            if (best < 0 || count[v] < count[best]) best = v;
        }
        return best;
    }

    std::vector<int> values_for(int v) const {
        std::vector<int> out;
        for (int code : csp.search.valueOrder[v])
            if (in[v][code]) out.push_back(code);
        return out;
    }

    Assignment extract() const {
        Assignment a;
        a.componentValues.resize(C);
        a.propBits.assign(C, std::vector<uint8_t>(P, 0));
        a.provBits.assign(C, std::vector<uint8_t>(F, 0));
        a.channels.resize(K);
        for (int g = 0; g < N; ++g)
            if (fixedValue[g] < 0)
                throw std::logic_error("variable undetermined at a search leaf");
        for (int v = 0; v < C; ++v) a.componentValues[v] = fixedValue[v];
        for (int v = 0; v < C; ++v) {
            for (int p = 0; p < P; ++p)
                a.propBits[v][p] = static_cast<uint8_t>(fixedValue[bit_id({v, SetKind::Properties, p})]);
            for (int f = 0; f < F; ++f)
                a.provBits[v][f] = static_cast<uint8_t>(fixedValue[bit_id({v, SetKind::Provides, f})]);
        }
        for (int k = 0; k < K; ++k) a.channels[k] = static_cast<uint8_t>(fixedValue[chan_id(k)]);
        return a;
    }

    std::optional<Assignment> next() {
        ensure_root();
        if (!rootOk || exhausted) return std::nullopt;
        enum class Mode { Descend, Expand, Backtrack };
        Mode mode = started ? Mode::Backtrack : Mode::Descend;
        started = true;
        while (true) {
            if (mode == Mode::Descend) {
                int v = select_var();
                if (v < 0) {
                    ++st.solutions;
                    return extract();
                }
                frames.push_back({v, values_for(v), 0, trail.size()});
                mode = Mode::Expand;
            } else if (mode == Mode::Expand) {
                Frame& f = frames.back();
                undo_to(f.mark);
                bool placed = false;
                while (f.idx < f.values.size()) {
                    int val = f.values[f.idx++];
                    if (!in[f.var][val]) continue;
                    ++st.nodes;
                    if (assign(f.var, val) && propagate()) {
                        placed = true;
                        break;
                    }
                    ++st.fails;
                    undo_to(f.mark);
                }
                if (placed) {
                    mode = Mode::Descend;
                } else {
                    frames.pop_back();
                    mode = Mode::Backtrack;
                }
            } else { // Backtrack
                if (frames.empty()) {
                    exhausted = true;
                    undo_to(rootMark);
                    return std::nullopt;
                }
                mode = Mode::Expand;
            }
        }
    }
};

Solver::Solver(const ConfigCsp& csp, bool dynamicOrder)
    : impl_(std::make_unique<Impl>(csp, dynamicOrder)) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

bool Solver::assume(int var, int code) { return impl_->assume(var, code); }

bool Solver::root_consistent() {
    impl_->ensure_root();
    return impl_->rootOk;
}

std::optional<Assignment> Solver::next() { return impl_->next(); }

std::vector<int> Solver::domain_values(int var) const {
    std::vector<int> out;
    for (int val = 0; val <= impl_->maxVal; ++val)
        if (impl_->in[var][val]) out.push_back(val);
    return out;
}

const std::optional<Solver::ConflictInfo>& Solver::last_conflict() const {
    return impl_->conflict;
}

const Solver::Stats& Solver::stats() const { return impl_->st; }

SolveResult solve_first(const ConfigCsp& csp, bool dynamicOrder) {
    Solver s(csp, dynamicOrder);
    SolveResult r;
    if (auto a = s.next()) {
        r.sat = true;
        r.assignment = std::move(*a);
        r.configuration = project(csp, r.assignment);
    }
    return r;
}

std::vector<Configuration> solve_all(const ConfigCsp& csp, std::optional<long> limit,
                                     bool dynamicOrder) {
    Solver s(csp, dynamicOrder);
    std::vector<Configuration> out;
    while (!limit || static_cast<long>(out.size()) < *limit) {
        auto a = s.next();
        if (!a) break;
        out.push_back(project(csp, *a));
    }
    return out;
}

std::optional<std::vector<std::vector<int>>> propagate_root(const ConfigCsp& csp) {
    Solver s(csp);
    if (!s.root_consistent()) return std::nullopt;
    std::vector<std::vector<int>> doms;
    for (size_t v = 0; v < csp.vars.size(); ++v)
        doms.push_back(s.domain_values(static_cast<int>(v)));
    return doms;
}

} // namespace confweave
