#pragma once

#include <string>

namespace alpp {

// Scalability family: for 1 <= i <= n the three constraints
//   0.6 :: b<i-1>(X) -> p<i>(X), q<i>(X).
//   0.6 :: p<i>(X) -> b<i>(X).
//   0.6 :: q<i>(X) -> b<i>(X).
// over abducibles b0..bn, p1..pn, q1..qn. Query with goal "b0(X)".
// Throws std::invalid_argument outside 1 <= n <= 20.
std::string gen_bench(int n);

}  // namespace alpp
