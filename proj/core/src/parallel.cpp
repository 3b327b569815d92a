#include "besovch/parallel.hpp"

#include <cstdlib>
#include <string>

#include "besovch/config.hpp"

namespace besovch {

std::size_t worker_count() {
  const std::size_t hw = std::max<unsigned>(std::thread::hardware_concurrency(), 1u);
  const char* env = std::getenv("BESOVCH_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  const std::vector<int> v = parse_int_list(env, "BESOVCH_THREADS");
  if (v.size() != 1 || v[0] < 1) throw ConfigError("BESOVCH_THREADS", "expected a positive integer");
  return std::min<std::size_t>(hw, static_cast<std::size_t>(v[0]));
}

}  // namespace besovch
