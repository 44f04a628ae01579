#include "mol/index.hpp"

#include <cassert>
#include <deque>

namespace mol {

bool ProgramIndex::isAncestorOrEqual(const std::string& ancestor,
                                     const std::string& descendant) const {
    auto it = ancestry.find(descendant);
    if (it == ancestry.end()) return false;
    return it->second.count(ancestor) != 0;
}

int ProgramIndex::ancestryDistance(const std::string& ancestor,
                                   const std::string& descendant) const {
    if (ancestor == descendant) return 0;
    auto it = classifiers.find(descendant);
    if (it == classifiers.end()) return -1;
    // BFS over parent edges.
    std::deque<std::pair<std::string, int>> frontier{{descendant, 0}};
    std::set<std::string> visited{descendant};
    while (!frontier.empty()) {
        auto [cur, dist] = frontier.front();
        frontier.pop_front();
        auto cit = classifiers.find(cur);
        if (cit == classifiers.end()) continue;
        for (const auto& parent : cit->second->parents) {
            if (parent == ancestor) return dist + 1;
            if (visited.insert(parent).second) frontier.push_back({parent, dist + 1});
        }
    }
    return -1;
}

const AbstractionKey* ProgramIndex::resolveCall(const std::string& name, int arity) const {
    auto it = call_targets.find({name, arity});
    return it == call_targets.end() ? nullptr : &it->second;
}

std::set<AbstractionKey> ProgramIndex::faceSignatures(const std::string& type_name) const {
    std::set<AbstractionKey> out;
    auto it = faces.find(type_name);
    if (it == faces.end()) return out;
    for (const auto& sig : it->second->signatures) out.insert(sig.key());
    return out;
}

const MethodDecl* ProgramIndex::findMethod(const std::string& name) const {
    for (const auto& m : program->methods) {
        if (m.qualifiedName() == name) return &m;
    }
    // Plain name: unique match wanted, free-standing preferred.
    const MethodDecl* found = nullptr;
    for (const auto& m : program->methods) {
        if (m.name != name) continue;
        if (!m.owner) return &m;
        if (!found) found = &m;
    }
    return found;
}

ProgramIndex buildIndex(const Program& p) {
    ProgramIndex idx;
    idx.program = &p;
    for (const auto& c : p.classifiers) idx.classifiers.emplace(c.name, &c);
    for (const auto& f : p.faces) idx.faces.emplace(f.name, &f);
    for (const auto& c : p.classes) idx.classes.emplace(c.name, &c);

    for (const auto& c : p.classifiers) {
        std::set<std::string>& anc = idx.ancestry[c.name];
        anc.insert(c.name);
        std::vector<std::string> frontier(c.parents.begin(), c.parents.end());
        while (!frontier.empty()) {
            std::string cur = frontier.back();
            frontier.pop_back();
            if (!anc.insert(cur).second) continue;
            auto it = idx.classifiers.find(cur);
            if (it == idx.classifiers.end()) continue;
            for (const auto& parent : it->second->parents) frontier.push_back(parent);
        }
    }

    std::map<std::pair<std::string, int>, std::set<AbstractionKey>> callables;
    for (const auto& m : p.methods) {
        AbstractionKey key = m.key();
        idx.implementations[key].push_back(&m);
        callables[{m.name, key.arity()}].insert(key);
    }
    for (const auto& [name_arity, keys] : callables) {
        assert(keys.size() == 1 && "validated programs have unique call targets");
        idx.call_targets.emplace(name_arity, *keys.begin());
    }
    return idx;
}

} // namespace mol
