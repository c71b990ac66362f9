#include "confweave/encoder.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "confweave/errors.hpp"
#include "confweave/printer.hpp"

namespace confweave {
namespace {

void add_impl(SymbolTable& sym, const std::string& name) {
    if (sym.implCode.count(name)) return;
    sym.implementations.push_back(name);
    sym.implCode[name] = static_cast<int>(sym.implementations.size());
}

void add_property(SymbolTable& sym, const std::string& name) {
    if (sym.propertyIndex.count(name)) return;
    sym.propertyIndex[name] = static_cast<int>(sym.properties.size());
    sym.properties.push_back(name);
}

void add_facility(SymbolTable& sym, const std::string& name) {
    if (sym.facilityIndex.count(name)) return;
    sym.facilityIndex[name] = static_cast<int>(sym.facilities.size());
    sym.facilities.push_back(name);
}

// A literal set compared against `.properties` names properties; against
// `.provides` it names facilities. `with` lists always name properties.
void collect_from_checks(SymbolTable& sym, const std::vector<Check>& checks) {
    for (const auto& c : checks) {
        if (const auto* sc = std::get_if<SubsetCheck>(&c.node)) {
            const SetExpr* lit = nullptr;
            const SetExpr* ent = nullptr;
            for (const SetExpr* se : {&sc->lhs, &sc->rhs})
                (se->kind == SetExpr::Kind::Literal ? lit : ent) = se;
            if (!lit || !ent) continue; // malformed; validation rejects it
            for (const auto& item : lit->items)
                ent->select == SetKind::Properties ? add_property(sym, item)
                                                   : add_facility(sym, item);
        } else {
            for (const auto& p : std::get<AcceptsCheck>(c.node).withProperties)
                add_property(sym, p);
        }
    }
}

void collect_from_problem(SymbolTable& sym, const ProblemSpec& problem) {
    for (const auto& r : problem.requirements) add_facility(sym, r.facility);
    collect_from_checks(sym, problem.checks);
}

// An obligation a template places on whichever component fills one of its
// parameters: a single auxiliary bit forced to a value.
struct Obligation {
    SetKind kind;
    int index;
    bool value;
};

// Derives the obligations of `tmpl`'s parameter `param` from the
// template's subsetof checks. A literal on the left forces listed bits on;
// a literal on the right forces every unlisted bit of that array off.
std::vector<Obligation> param_obligations(const SymbolTable& sym, const Template& tmpl,
                                          const std::string& param) {
    std::vector<Obligation> out;
    for (const auto& c : tmpl.checks) {
        const auto* sc = std::get_if<SubsetCheck>(&c.node);
        if (!sc) continue;
        const SetExpr* lit = nullptr;
        const SetExpr* ent = nullptr;
        for (const SetExpr* se : {&sc->lhs, &sc->rhs})
            (se->kind == SetExpr::Kind::Literal ? lit : ent) = se;
        if (!lit || !ent) continue;
        if (ent->entity.path.size() != 1 || ent->entity.path[0] != param) continue;
        bool props = ent->select == SetKind::Properties;
        auto indexOf = [&](const std::string& n) {
            return props ? sym.property_of(n) : sym.facility_of(n);
        };
        if (ent == &sc->rhs) {
            for (const auto& item : lit->items)
                out.push_back({ent->select, indexOf(item), true});
        } else {
            std::set<int> allowed;
            for (const auto& item : lit->items) allowed.insert(indexOf(item));
            int universe = static_cast<int>(props ? sym.properties.size() : sym.facilities.size());
            for (int i = 0; i < universe; ++i)
                if (!allowed.count(i)) out.push_back({ent->select, i, false});
        }
    }
    return out;
}

struct Encoder {
    const ComponentLibrary& lib;
    const ProblemSpec& problem;
    int depthLimit;
    ConfigCsp csp;

    const Template* impl_of(int code) const {
        return lib.find_template(csp.symbols.impl_name(code));
    }

    std::string guard_text(const Guard& g) const {
        std::string out;
        for (const auto& lit : g) {
            if (!out.empty()) out += " and ";
            out += csp.vars[lit.var].path + "=" + csp.symbols.impl_name(lit.code);
        }
        return out;
    }

    void add(CspConstraint c) { csp.constraints.push_back(std::move(c)); }

    void membership_constraints() {
        int P = static_cast<int>(csp.symbols.properties.size());
        int F = static_cast<int>(csp.symbols.facilities.size());
        for (int v = 0; v < static_cast<int>(csp.vars.size()); ++v) {
            const auto& var = csp.vars[v];
            for (int p = 0; p < P; ++p) {
                IffMembership m{{v, SetKind::Properties, p}, v, {}};
                for (int code : var.domain) {
                    if (code == SymbolTable::kInactive) continue;
                    const Template* t = impl_of(code);
                    if (t && std::count(t->properties.begin(), t->properties.end(),
                                        csp.symbols.properties[p]))
                        m.codes.push_back(code);
                }
                add({std::move(m),
                     "property '" + csp.symbols.properties[p] + "' of '" + var.path + "'"});
            }
            for (int f = 0; f < F; ++f) {
                IffMembership m{{v, SetKind::Provides, f}, v, {}};
                for (int code : var.domain) {
                    if (code == SymbolTable::kInactive) continue;
                    const Template* t = impl_of(code);
                    if (t && std::count(t->provides.begin(), t->provides.end(),
                                        csp.symbols.facilities[f]))
                        m.codes.push_back(code);
                }
                add({std::move(m),
                     "facility '" + csp.symbols.facilities[f] + "' of '" + var.path + "'"});
            }
        }
    }

    // Direct subsetof on a requirement variable: bits forced under `guard`.
    void encode_subset(const SubsetCheck& sc, int var, const Guard& guard,
                       const std::string& origin) {
        const SetExpr* lit = nullptr;
        const SetExpr* ent = nullptr;
        for (const SetExpr* se : {&sc.lhs, &sc.rhs})
            (se->kind == SetExpr::Kind::Literal ? lit : ent) = se;
        if (!lit || !ent) return;
        bool props = ent->select == SetKind::Properties;
        auto indexOf = [&](const std::string& n) {
            return props ? csp.symbols.property_of(n) : csp.symbols.facility_of(n);
        };
        if (ent == &sc.rhs) {
            for (const auto& item : lit->items)
                add({ForceBit{{var, ent->select, indexOf(item)}, true, guard}, origin});
        } else {
            std::set<int> allowed;
            for (const auto& item : lit->items) allowed.insert(indexOf(item));
            int universe = static_cast<int>(props ? csp.symbols.properties.size()
                                                  : csp.symbols.facilities.size());
            for (int i = 0; i < universe; ++i)
                if (!allowed.count(i))
                    add({ForceBit{{var, ent->select, i}, false, guard}, origin});
        }
    }

    // slot.param accepts cand: whichever template fills the slot passes its
    // obligations for `param` on to the candidate variable, except
    // properties waived by the `with` clause.
    void encode_accepts(const AcceptsCheck& ac, int ownerVar, int candVar, const Guard& context) {
        const std::string& param = ac.slot.path[1];
        std::set<std::string> waived(ac.withProperties.begin(), ac.withProperties.end());
        for (int code : csp.vars[ownerVar].domain) {
            if (code == SymbolTable::kInactive) continue;
            const Template* t = impl_of(code);
            if (!t || !t->has_param(param)) continue;
            GuardedImplication gi;
            gi.guard = context;
            gi.guard.push_back({ownerVar, code});
            for (const auto& ob : param_obligations(csp.symbols, *t, param)) {
                if (ob.kind == SetKind::Properties &&
                    waived.count(csp.symbols.properties[ob.index]))
                    continue;
                gi.consequents.push_back({BitRef{candVar, ob.kind, ob.index}, ob.value});
            }
            if (gi.consequents.empty()) continue;
            add({std::move(gi), "check '" + csp.vars[ownerVar].path + "." + param + " accepts " +
                                    csp.vars[candVar].path + "' via '" + t->name + "'"});
        }
    }

    // Template checks act at every site where the template can be chosen;
    // the site is identified by the conditional variables it spawned.
    void site_checks() {
        // Group conditional vars into (parent, template) sites preserving
        // first-variable order.
        struct Site {
            int parent;
            const Template* tmpl;
            std::map<std::string, int> reqVars; // local requirement name -> var
            Guard context;                      // parent prereq + parent=code
        };
        std::vector<Site> sites;
        std::map<std::pair<int, int>, size_t> siteIndex; // (parent, code) -> site
        for (int v = 0; v < static_cast<int>(csp.vars.size()); ++v) {
            const auto& var = csp.vars[v];
            if (!var.conditional()) continue;
            int code = var.prerequisite.back().code;
            auto key = std::make_pair(var.parent, code);
            auto it = siteIndex.find(key);
            if (it == siteIndex.end()) {
                it = siteIndex.emplace(key, sites.size()).first;
                sites.push_back({var.parent, impl_of(code), {}, var.prerequisite});
            }
            std::string local = var.path.substr(var.path.rfind('/') + 1);
            sites[it->second].reqVars[local] = v;
        }
        for (const auto& site : sites) {
            for (const auto& c : site.tmpl->checks) {
                if (const auto* sc = std::get_if<SubsetCheck>(&c.node)) {
                    const SetExpr* ent = sc->lhs.kind == SetExpr::Kind::EntitySet ? &sc->lhs
                                                                                  : &sc->rhs;
                    if (ent->kind != SetExpr::Kind::EntitySet || ent->entity.path.size() != 1)
                        continue;
                    auto it = site.reqVars.find(ent->entity.path[0]);
                    if (it == site.reqVars.end()) continue; // names a parameter
                    encode_subset(*sc, it->second, site.context,
                                  "check '" + render_check(c) + "' of '" + site.tmpl->name +
                                      "' at '" + csp.vars[it->second].path + "'");
                } else {
                    const auto& ac = std::get<AcceptsCheck>(c.node);
                    auto owner = site.reqVars.find(ac.slot.path[0]);
                    auto cand = site.reqVars.find(ac.candidate.path[0]);
                    if (owner == site.reqVars.end() || cand == site.reqVars.end()) continue;
                    encode_accepts(ac, owner->second, cand->second, site.context);
                }
            }
        }
    }

    void problem_checks() {
        for (const auto& c : problem.checks) {
            if (const auto* sc = std::get_if<SubsetCheck>(&c.node)) {
                const SetExpr* ent = sc->lhs.kind == SetExpr::Kind::EntitySet ? &sc->lhs : &sc->rhs;
                if (ent->kind != SetExpr::Kind::EntitySet) continue;
                int var = csp.var_of(ent->entity.path[0]);
                if (var < 0) continue;
                encode_subset(*sc, var, {}, "check '" + render_check(c) + "' of problem '" +
                                                problem.name + "'");
            } else {
                const auto& ac = std::get<AcceptsCheck>(c.node);
                int ownerVar = csp.var_of(ac.slot.path[0]);
                int candVar = csp.var_of(ac.candidate.path[0]);
                if (ownerVar < 0 || candVar < 0) continue;
                encode_accepts(ac, ownerVar, candVar, {});
            }
        }
    }

    void sentinel_links() {
        for (int v = 0; v < static_cast<int>(csp.vars.size()); ++v) {
            const auto& var = csp.vars[v];
            if (!var.conditional()) continue;
            add({SentinelLink{v, var.prerequisite, -1}, "activation of '" + var.path + "'"});
        }
    }

    // One channel per distinct non-empty guard, numbered in order of first
    // appearance; every guarded constraint is also expressed through its
    // channel so the model can be emitted flat.
    void lower_channels() {
        std::map<Guard, int> channelOf;
        std::vector<const Guard*> guards;
        auto channel = [&](const Guard& g) {
            auto it = channelOf.find(g);
            if (it != channelOf.end()) return it->second;
            int id = static_cast<int>(guards.size());
            channelOf.emplace(g, id);
            guards.push_back(&channelOf.find(g)->first);
            return id;
        };
        for (auto& c : csp.constraints) {
            if (auto* fb = std::get_if<ForceBit>(&c.node)) {
                if (!fb->guard.empty()) channel(fb->guard);
            } else if (auto* gi = std::get_if<GuardedImplication>(&c.node)) {
                channel(gi->guard);
            } else if (auto* sl = std::get_if<SentinelLink>(&c.node)) {
                sl->channel = channel(sl->prerequisite);
            }
        }
        csp.channelCount = static_cast<int>(guards.size());
        for (int i = 0; i < csp.channelCount; ++i)
            add({ChannelReify{i, *guards[i]}, "channel for '" + guard_text(*guards[i]) + "'"});

        // Collected separately: add() could reallocate the vector being
        // iterated.
        std::set<std::tuple<int, int, int, int, bool>> seen;
        std::vector<CspConstraint> lowered;
        auto emit = [&](const Guard& g, const BitRef& bit, bool value,
                        const std::string& origin) {
            int ch = channelOf.at(g);
            if (!seen.insert({ch, bit.var, static_cast<int>(bit.array), bit.index, value}).second)
                return;
            lowered.push_back({ChannelImply{ch, bit, value}, origin});
        };
        for (const auto& c : csp.constraints) {
            if (const auto* fb = std::get_if<ForceBit>(&c.node)) {
                if (!fb->guard.empty()) emit(fb->guard, fb->bit, fb->value, c.origin);
            } else if (const auto* gi = std::get_if<GuardedImplication>(&c.node)) {
                for (const auto& [bit, value] : gi->consequents)
                    emit(gi->guard, bit, value, c.origin);
            }
        }
        for (auto& c : lowered) add(std::move(c));
    }

    ConfigCsp run() {
        csp.symbols = build_symbols(lib);
        collect_from_problem(csp.symbols, problem);
        csp.vars = expand(lib, problem, depthLimit);
        for (int v = 0; v < static_cast<int>(csp.vars.size()); ++v)
            csp.varIndex[csp.vars[v].path] = v;
        membership_constraints();
        problem_checks();
        site_checks();
        sentinel_links();
        lower_channels();
        csp.search.varOrder.resize(csp.vars.size());
        for (size_t i = 0; i < csp.vars.size(); ++i)
            csp.search.varOrder[i] = static_cast<int>(i);
        for (const auto& var : csp.vars) csp.search.valueOrder.push_back(var.domain);
        return std::move(csp);
    }
};

} // namespace

std::vector<const Template*> candidate_implementations(const ComponentLibrary& library,
                                                       const std::string& facility) {
    std::vector<const Template*> out;
    for (const auto& t : library.templates)
        if (std::count(t.provides.begin(), t.provides.end(), facility)) out.push_back(&t);
    return out;
}

SymbolTable build_symbols(const ComponentLibrary& library) {
    SymbolTable sym;
    for (const auto& t : library.templates) {
        add_impl(sym, t.name);
        for (const auto& f : t.provides) add_facility(sym, f);
        for (const auto& p : t.properties) add_property(sym, p);
        for (const auto& r : t.requirements) add_facility(sym, r.facility);
        collect_from_checks(sym, t.checks);
    }
    return sym;
}

std::vector<ComponentVar> expand(const ComponentLibrary& library, const ProblemSpec& problem,
                                 int depthLimit) {
    SymbolTable sym = build_symbols(library);
    std::vector<ComponentVar> vars;
    std::deque<int> queue;

    auto domain_for = [&](const std::string& facility, bool conditional) {
        std::vector<int> dom;
        if (conditional) dom.push_back(SymbolTable::kInactive);
        for (const Template* t : candidate_implementations(library, facility))
            dom.push_back(sym.code_of(t->name));
        std::sort(dom.begin(), dom.end());
        return dom;
    };

    for (const auto& r : problem.requirements) {
        vars.push_back({r.name, r.facility, domain_for(r.facility, false), {}, -1});
        queue.push_back(static_cast<int>(vars.size()) - 1);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        // Copy: vars may reallocate while children are appended.
        ComponentVar parent = vars[v];
        for (const Template* t : candidate_implementations(library, parent.facility)) {
            for (const auto& r : t->requirements) {
                ComponentVar child;
                child.path = parent.path + "=" + t->name + "/" + r.name;
                child.facility = r.facility;
                child.prerequisite = parent.prerequisite;
                child.prerequisite.push_back({v, sym.code_of(t->name)});
                child.parent = v;
                if (static_cast<int>(child.prerequisite.size()) + 1 > depthLimit)
                    throw DepthExceededError(child.path);
                child.domain = domain_for(r.facility, true);
                vars.push_back(std::move(child));
                queue.push_back(static_cast<int>(vars.size()) - 1);
            }
        }
    }
    return vars;
}

ConfigCsp encode(const ComponentLibrary& library, const ProblemSpec& problem, int depthLimit) {
    Encoder enc{library, problem, depthLimit, {}};
    return enc.run();
}

ConfigCsp set_search_order(ConfigCsp csp, const std::vector<std::string>& varOrder,
                           const std::map<std::string, std::vector<int>>& valuePrefs) {
    std::vector<int> front;
    std::set<int> moved;
    for (const auto& path : varOrder) {
        int v = csp.var_of(path);
        if (v < 0) throw UnknownVariableError(path);
        if (!moved.insert(v).second)
            throw InvalidPreferenceError("variable '" + path + "' listed twice in search order");
        front.push_back(v);
    }
    std::vector<int> order = front;
    for (int v : csp.search.varOrder)
        if (!moved.count(v)) order.push_back(v);
    csp.search.varOrder = std::move(order);

    for (const auto& [path, prefs] : valuePrefs) {
        int v = csp.var_of(path);
        if (v < 0) throw UnknownVariableError(path);
        const auto& domain = csp.vars[v].domain;
        std::set<int> used;
        std::vector<int> newOrder;
        for (int code : prefs) {
            if (!std::count(domain.begin(), domain.end(), code))
                throw InvalidPreferenceError("value " + std::to_string(code) +
                                             " is not in the domain of '" + path + "'");
            if (!used.insert(code).second)
                throw InvalidPreferenceError("value " + std::to_string(code) +
                                             " listed twice for '" + path + "'");
            newOrder.push_back(code);
        }
        for (int code : csp.search.valueOrder[v])
            if (!used.count(code)) newOrder.push_back(code);
        csp.search.valueOrder[v] = std::move(newOrder);
    }
    return csp;
}

} // namespace confweave
