#include "confweave/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace confweave {
namespace {

struct Validator {
    const ComponentLibrary& lib;
    const ProblemSpec& problem;
    std::vector<Diagnostic> diags;

    std::map<std::string, std::vector<const Template*>> providers;

    void index_providers() {
        for (const auto& t : lib.templates)
            for (const auto& f : t.provides) providers[f].push_back(&t);
    }

    void check_requirement(const Requirement& r, const std::string& file) {
        if (!providers.count(r.facility))
            diags.push_back({Severity::Error, "no implementation provides '" + r.facility + "'",
                             file, r.span});
    }

    // The facility of requirement `name` in the given scope, if known.
    static const Requirement* find_req(const std::vector<Requirement>& reqs,
                                       const std::string& name) {
        for (const auto& r : reqs)
            if (r.name == name) return &r;
        return nullptr;
    }

    void check_checks(const std::vector<Check>& checks, const std::vector<Requirement>& reqs,
                      const std::string& file) {
        for (const auto& c : checks) {
            if (const auto* sc = std::get_if<SubsetCheck>(&c.node)) {
                bool lhsLit = sc->lhs.kind == SetExpr::Kind::Literal;
                bool rhsLit = sc->rhs.kind == SetExpr::Kind::Literal;
                if (lhsLit && rhsLit)
                    diags.push_back({Severity::Error,
                                     "'subsetof' check has two literal sides; exactly one side "
                                     "must be a literal set",
                                     file, c.span});
                else if (!lhsLit && !rhsLit)
                    diags.push_back({Severity::Error,
                                     "'subsetof' check has no literal side; exactly one side "
                                     "must be a literal set",
                                     file, c.span});
            } else {
                const auto& ac = std::get<AcceptsCheck>(c.node);
                if (ac.slot.path.size() != 2) continue; // already diagnosed at parse
                const Requirement* owner = find_req(reqs, ac.slot.path[0]);
                if (!owner) continue;
                auto it = providers.find(owner->facility);
                if (it == providers.end()) continue; // missing provider reported separately
                const std::string& param = ac.slot.path[1];
                bool found = std::any_of(it->second.begin(), it->second.end(),
                                         [&](const Template* t) { return t->has_param(param); });
                if (!found)
                    diags.push_back({Severity::Error,
                                     "parameter '" + param + "' does not exist in any "
                                     "implementation of '" + owner->facility + "'",
                                     file, ac.slot.span});
            }
        }
    }

    // Edge T -> U when U provides a facility required by T. A cycle means
    // expansion only terminates through the depth limit.
    void check_cycles() {
        size_t n = lib.templates.size();
        std::vector<std::vector<size_t>> adj(n);
        std::map<const Template*, size_t> index;
        for (size_t i = 0; i < n; ++i) index[&lib.templates[i]] = i;
        for (size_t i = 0; i < n; ++i)
            for (const auto& r : lib.templates[i].requirements) {
                auto it = providers.find(r.facility);
                if (it == providers.end()) continue;
                for (const Template* u : it->second) adj[i].push_back(index[u]);
            }

        std::vector<int> color(n, 0); // 0 unvisited, 1 on stack, 2 done
        std::vector<size_t> stack;
        std::set<std::string> reported;

        auto report = [&](size_t backTo) {
            std::ostringstream os;
            auto start = std::find(stack.begin(), stack.end(), backTo);
            std::vector<std::string> names;
            for (auto it = start; it != stack.end(); ++it)
                names.push_back(lib.templates[*it].name);
            // Canonicalise by rotating the smallest name to the front so each
            // cycle is reported once regardless of entry point.
            auto minIt = std::min_element(names.begin(), names.end());
            std::rotate(names.begin(), minIt, names.end());
            std::string key;
            for (const auto& s : names) key += s + "|";
            if (!reported.insert(key).second) return;
            for (const auto& s : names) os << s << " -> ";
            os << names.front();
            diags.push_back({Severity::Warning, "requirement cycle: " + os.str(), lib.file,
                             lib.templates[stack[start - stack.begin()]].span});
        };

        // Iterative DFS so deep libraries cannot overflow the call stack.
        struct Frame {
            size_t node;
            size_t next = 0;
        };
        for (size_t root = 0; root < n; ++root) {
            if (color[root] != 0) continue;
            std::vector<Frame> frames{{root}};
            color[root] = 1;
            stack.push_back(root);
            while (!frames.empty()) {
                Frame& f = frames.back();
                if (f.next < adj[f.node].size()) {
                    size_t next = adj[f.node][f.next++];
                    if (color[next] == 0) {
                        color[next] = 1;
                        stack.push_back(next);
                        frames.push_back({next});
                    } else if (color[next] == 1) {
                        report(next);
                    }
                } else {
                    color[f.node] = 2;
                    stack.pop_back();
                    frames.pop_back();
                }
            }
        }
    }

    // A template is usable when some facility reachable from the problem's
    // requirements selects it as a candidate.
    void check_unused() {
        std::set<std::string> reachable;
        std::vector<std::string> work;
        for (const auto& r : problem.requirements) work.push_back(r.facility);
        std::set<const Template*> used;
        while (!work.empty()) {
            std::string f = work.back();
            work.pop_back();
            if (!reachable.insert(f).second) continue;
            auto it = providers.find(f);
            if (it == providers.end()) continue;
            for (const Template* t : it->second) {
                if (!used.insert(t).second) continue;
                for (const auto& r : t->requirements) work.push_back(r.facility);
            }
        }
        for (const auto& t : lib.templates)
            if (!used.count(&t))
                diags.push_back({Severity::Warning,
                                 "template '" + t.name +
                                     "' is not a candidate for any reachable requirement",
                                 lib.file, t.span});
    }

    std::vector<Diagnostic> run() {
        index_providers();
        for (const auto& t : lib.templates) {
            for (const auto& r : t.requirements) check_requirement(r, lib.file);
            check_checks(t.checks, t.requirements, lib.file);
        }
        for (const auto& r : problem.requirements) check_requirement(r, problem.file);
        check_checks(problem.checks, problem.requirements, problem.file);
        check_cycles();
        check_unused();
        return std::move(diags);
    }
};

} // namespace

std::vector<Diagnostic> validate(const ComponentLibrary& library, const ProblemSpec& problem) {
    Validator v{library, problem, {}, {}};
    return v.run();
}

} // namespace confweave
