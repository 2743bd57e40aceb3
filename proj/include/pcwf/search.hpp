#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pcwf {

/// An element of a finite set, addressed by index.
using Elem = std::uint32_t;

namespace search {

/// Constraint value[to] == table[value[from]].
struct Link {
  std::uint32_t from;
  std::uint32_t to;
  std::span<const Elem> table;
};

struct Limits {
  std::size_t max_solutions = SIZE_MAX;
  std::size_t max_nodes = SIZE_MAX;  // candidate values tried
};

/// Enumerates every assignment value[i] < domains[i] satisfying all links,
/// in lexicographic order, passing each to `visit`. Links with `to` after
/// `from` force the later variable, so natural families are generated
/// without blind search. Throws BudgetExceeded naming `what` when a limit
/// is hit. Returns the number of solutions.
std::size_t solve(std::span<const std::uint32_t> domains, std::span<const Link> links, const Limits& limits,
                  const std::function<void(std::span<const Elem>)>& visit, const std::string& what);

}  // namespace search
}  // namespace pcwf
