#pragma once

// Exact-arithmetic oracle for the (2,3,7) triangle reflection group,
// independent of the floating-point pipeline it cross-checks.
//
// Elements are 3x3 matrices of the geometric representation in the basis of
// the wall normals: r_i sends e_k to e_k - 2 G_ik e_i, so entries live in
// Q(c) with c = cos(pi/7), minimal polynomial 8c^3 - 4c^2 - 4c + 1 = 0.
// Arithmetic is exact (int64 fractions with overflow checks), so equal
// matrices mean equal group elements and the BFS counts are ground truth.

#include <cstdint>
#include <vector>

namespace hywalk_oracle {

struct Frac {
    long long num = 0;
    long long den = 1;
};

// |ball(radius)| in the (2,3,7) reflection group, exact dedup.
std::vector<std::size_t> triangle237_ball_sizes(int radius);

// Number of distinct elements among the first n_words words over the three
// generators, enumerated in length-then-lex order.
std::size_t triangle237_distinct_words(std::size_t n_words);

}  // namespace hywalk_oracle
