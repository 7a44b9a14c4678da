#include "alpp/bench.hpp"

#include <sstream>
#include <stdexcept>

namespace alpp {

std::string gen_bench(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("bench size must be in 1..20");
  std::ostringstream os;
  os << "% chain family, " << 3 * n << " probabilistic constraints\n";
  for (int i = 0; i <= n; ++i) os << "abducible b" << i << "/1.\n";
  for (int i = 1; i <= n; ++i) os << "abducible p" << i << "/1.\nabducible q" << i << "/1.\n";
  for (int i = 1; i <= n; ++i) {
    os << "0.6 :: b" << i - 1 << "(X) -> p" << i << "(X), q" << i << "(X).\n";
    os << "0.6 :: p" << i << "(X) -> b" << i << "(X).\n";
    os << "0.6 :: q" << i << "(X) -> b" << i << "(X).\n";
  }
  return os.str();
}

}  // namespace alpp
