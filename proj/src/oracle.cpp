#include "confweave/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "confweave/errors.hpp"

namespace confweave {
namespace {

bool provides_facility(const Template& t, const std::string& facility) {
    return std::count(t.provides.begin(), t.provides.end(), facility) > 0;
}

// Every requirement path that can become active, with its facility, in
// breadth-first discovery order. Structural: covers all candidate
// branches, so the depth limit is enforced no matter what gets chosen.
std::vector<std::pair<std::string, std::string>> all_paths(const ComponentLibrary& lib,
                                                           const ProblemSpec& prob,
                                                           int depthLimit) {
    std::vector<std::pair<std::string, std::string>> out;
    struct Item {
        std::string path;
        std::string facility;
        int depth;
    };
    std::deque<Item> queue;
    for (const auto& r : prob.requirements) queue.push_back({r.name, r.facility, 1});
    while (!queue.empty()) {
        Item cur = queue.front();
        queue.pop_front();
        out.push_back({cur.path, cur.facility});
        for (const auto& t : lib.templates) {
            if (!provides_facility(t, cur.facility)) continue;
            for (const auto& r : t.requirements) {
                std::string child = cur.path + "=" + t.name + "/" + r.name;
                if (cur.depth + 1 > depthLimit) throw DepthExceededError(child);
                queue.push_back({child, r.facility, cur.depth + 1});
            }
        }
    }
    return out;
}

// Evaluates checks directly on a total choice M: active path -> template
// name. `scope` maps the local names legal in the check's declaring scope
// to full paths; parameters are deliberately absent from it.
struct Evaluator {
    const ComponentLibrary& lib;
    const std::map<std::string, std::string>& M;

    std::set<std::string> set_of(const std::string& path, SetKind kind) const {
        auto it = M.find(path);
        if (it == M.end()) return {};
        const Template* t = lib.find_template(it->second);
        if (!t) return {};
        const auto& v = kind == SetKind::Properties ? t->properties : t->provides;
        return {v.begin(), v.end()};
    }

    static std::pair<const SetExpr*, const SetExpr*> split(const SubsetCheck& sc) {
        const SetExpr* lit = nullptr;
        const SetExpr* ent = nullptr;
        for (const SetExpr* se : {&sc.lhs, &sc.rhs})
            (se->kind == SetExpr::Kind::Literal ? lit : ent) = se;
        return {lit, ent};
    }

    bool eval_subset(const SubsetCheck& sc, const std::map<std::string, std::string>& scope) const {
        auto [lit, ent] = split(sc);
        if (!lit || !ent || ent->entity.path.size() != 1) return true;
        auto it = scope.find(ent->entity.path[0]);
        if (it == scope.end()) return true; // names a parameter: an obligation, not a test
        std::set<std::string> have = set_of(it->second, ent->select);
        if (ent == &sc.rhs) {
            for (const auto& item : lit->items)
                if (!have.count(item)) return false;
            return true;
        }
        std::set<std::string> allowed(lit->items.begin(), lit->items.end());
        for (const auto& member : have)
            if (!allowed.count(member)) return false;
        return true;
    }

    // The template filling the slot passes its obligations for the named
    // parameter on to the candidate; `with` waives property obligations
    // in both directions.
    bool eval_accepts(const AcceptsCheck& ac,
                      const std::map<std::string, std::string>& scope) const {
        if (ac.slot.path.size() != 2 || ac.candidate.path.size() != 1) return true;
        auto ownerIt = scope.find(ac.slot.path[0]);
        auto candIt = scope.find(ac.candidate.path[0]);
        if (ownerIt == scope.end() || candIt == scope.end()) return true;
        auto chosen = M.find(ownerIt->second);
        if (chosen == M.end()) return true; // owner inactive: nothing to impose
        const Template* owner = lib.find_template(chosen->second);
        const std::string& param = ac.slot.path[1];
        if (!owner || !owner->has_param(param)) return true;
        std::set<std::string> waived(ac.withProperties.begin(), ac.withProperties.end());

        for (const auto& c : owner->checks) {
            const auto* sc = std::get_if<SubsetCheck>(&c.node);
            if (!sc) continue;
            auto [lit, ent] = split(*sc);
            if (!lit || !ent || ent->entity.path.size() != 1 || ent->entity.path[0] != param)
                continue;
            bool props = ent->select == SetKind::Properties;
            std::set<std::string> have = set_of(candIt->second, ent->select);
            if (ent == &sc->rhs) {
                for (const auto& item : lit->items) {
                    if (props && waived.count(item)) continue;
                    if (!have.count(item)) return false;
                }
            } else {
                std::set<std::string> allowed(lit->items.begin(), lit->items.end());
                for (const auto& member : have) {
                    if (props && waived.count(member)) continue;
                    if (!allowed.count(member)) return false;
                }
            }
        }
        return true;
    }

    bool eval(const Check& c, const std::map<std::string, std::string>& scope) const {
        if (const auto* sc = std::get_if<SubsetCheck>(&c.node)) return eval_subset(*sc, scope);
        return eval_accepts(std::get<AcceptsCheck>(c.node), scope);
    }
};

struct Generator {
    const ComponentLibrary& lib;
    const ProblemSpec& prob;
    std::map<std::string, std::string> M;
    std::vector<Configuration> out;

    bool config_ok() const {
        Evaluator ev{lib, M};
        std::map<std::string, std::string> scope;
        for (const auto& r : prob.requirements) scope[r.name] = r.name;
        for (const auto& c : prob.checks)
            if (!ev.eval(c, scope)) return false;
        for (const auto& [path, tname] : M) {
            const Template* t = lib.find_template(tname);
            if (!t || t->checks.empty()) continue;
            std::map<std::string, std::string> site;
            for (const auto& r : t->requirements)
                site[r.name] = path + "=" + tname + "/" + r.name;
            for (const auto& c : t->checks)
                if (!ev.eval(c, site)) return false;
        }
        return true;
    }

    struct Pending {
        std::string path;
        std::string facility;
    };

    void step(std::deque<Pending> frontier) {
        if (frontier.empty()) {
            if (config_ok()) out.push_back(M);
            return;
        }
        Pending cur = frontier.front();
        frontier.pop_front();
        for (const auto& t : lib.templates) {
            if (!provides_facility(t, cur.facility)) continue;
            M[cur.path] = t.name;
            std::deque<Pending> next = frontier;
            for (const auto& r : t.requirements)
                next.push_back({cur.path + "=" + t.name + "/" + r.name, r.facility});
            step(std::move(next));
            M.erase(cur.path);
        }
    }
};

} // namespace

std::vector<Configuration> enumerate_configurations(const ComponentLibrary& library,
                                                    const ProblemSpec& problem, int depthLimit) {
    all_paths(library, problem, depthLimit); // structural depth enforcement
    Generator gen{library, problem, {}, {}};
    std::deque<Generator::Pending> frontier;
    for (const auto& r : problem.requirements) frontier.push_back({r.name, r.facility});
    gen.step(std::move(frontier));
    return gen.out;
}

void sort_configurations(const ComponentLibrary& library, const ProblemSpec& problem,
                         std::vector<Configuration>& configs,
                         const std::vector<std::string>& varOrder,
                         const std::map<std::string, std::vector<std::string>>& valuePrefs,
                         int depthLimit) {
    auto paths = all_paths(library, problem, depthLimit);

    std::vector<std::string> order;
    std::set<std::string> placed;
    auto known = [&](const std::string& p) {
        return std::any_of(paths.begin(), paths.end(),
                           [&](const auto& pf) { return pf.first == p; });
    };
    for (const auto& p : varOrder)
        if (known(p) && placed.insert(p).second) order.push_back(p);
    for (const auto& [p, f] : paths)
        if (!placed.count(p)) order.push_back(p);

    // Rank per path: preferred names first, then "inactive" as code 0 and
    // the rest by library declaration order (their codes).
    std::map<std::string, std::map<std::string, int>> rank; // path -> name -> rank
    constexpr const char* kInactiveKey = "";
    for (const auto& [p, facility] : paths) {
        auto& r = rank[p];
        int next = 0;
        auto prefIt = valuePrefs.find(p);
        if (prefIt != valuePrefs.end())
            for (const auto& name : prefIt->second)
                if (!r.count(name)) r[name] = next++;
        if (!r.count(kInactiveKey)) r[kInactiveKey] = next;
        for (size_t i = 0; i < library.templates.size(); ++i) {
            const auto& name = library.templates[i].name;
            if (!r.count(name)) r[name] = next + 1 + static_cast<int>(i);
        }
    }

    auto rank_of = [&](const Configuration& c, const std::string& p) {
        auto it = c.find(p);
        const std::string& name = it == c.end() ? std::string(kInactiveKey) : it->second;
        return rank.at(p).at(name);
    };
    std::stable_sort(configs.begin(), configs.end(),
                     [&](const Configuration& a, const Configuration& b) {
                         for (const auto& p : order) {
                             int ra = rank_of(a, p), rb = rank_of(b, p);
                             if (ra != rb) return ra < rb;
                         }
                         return false;
                     });
}

} // namespace confweave
