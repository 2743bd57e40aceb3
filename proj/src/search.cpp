#include "pcwf/search.hpp"

#include "pcwf/error.hpp"

namespace pcwf::search {

std::size_t solve(std::span<const std::uint32_t> domains, std::span<const Link> links, const Limits& limits,
                  const std::function<void(std::span<const Elem>)>& visit, const std::string& what) {
  const std::size_t n = domains.size();
  // For each variable: links that force it from an earlier variable, and
  // links that must be re-checked once it is assigned.
  std::vector<std::vector<const Link*>> forcing(n), checks(n);
  for (const Link& l : links) {
    if (l.from < l.to) {
      forcing[l.to].push_back(&l);
    } else {
      checks[l.from].push_back(&l);
    }
  }

  std::vector<Elem> value(n);
  std::size_t solutions = 0;
  std::size_t nodes = 0;

  auto holds = [&](std::size_t v) {
    for (const Link* l : checks[v]) {
      const Elem x = value[l->from];
      if (x >= l->table.size() || l->table[x] != value[l->to]) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> step = [&](std::size_t v) {
    if (v == n) {
      if (solutions == limits.max_solutions) throw BudgetExceeded(what, solutions);
      ++solutions;
      visit(value);
      return;
    }
    if (!forcing[v].empty()) {
      const Link* first = forcing[v].front();
      const Elem x = value[first->from];
      if (x >= first->table.size()) return;
      const Elem forced = first->table[x];
      if (forced >= domains[v]) return;
      for (const Link* l : forcing[v]) {
        const Elem y = value[l->from];
        if (y >= l->table.size() || l->table[y] != forced) return;
      }
      if (++nodes > limits.max_nodes) throw BudgetExceeded(what, solutions);
      value[v] = forced;
      if (holds(v)) step(v + 1);
      return;
    }
    for (Elem candidate = 0; candidate < domains[v]; ++candidate) {
      if (++nodes > limits.max_nodes) throw BudgetExceeded(what, solutions);
      value[v] = candidate;
      if (holds(v)) step(v + 1);
    }
  };
  step(0);
  return solutions;
}

}  // namespace pcwf::search
