#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "selberg/errors.hpp"

namespace selberg {

/// Enumerates multiplicity vectors (l_1,...,l_n) with 1*l_1 + ... + n*l_n = n,
/// i.e. the partitions of n, in a fixed deterministic order.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
    if (n < 0) throw argument_error("for_each_partition: n must be nonnegative");
    std::vector<int> mult(static_cast<std::size_t>(n) + 1, 0);
    std::function<void(int, int)> rec = [&](int remaining, int largest) {
        if (remaining == 0) {
            visit(mult);
            return;
        }
        for (int part = std::min(remaining, largest); part >= 1; --part) {
            ++mult[static_cast<std::size_t>(part)];
            rec(remaining - part, part);
            --mult[static_cast<std::size_t>(part)];
        }
    };
    rec(n, n);
}

/// n! / prod_i ( l_i! * (i!)^{l_i} ) for a multiplicity vector over {1..n}.
/// This is the coefficient attached to a partition both in the exponential
/// Bell expansion of F^(r)/F and in the composition rule for derivatives.
inline std::uint64_t partition_multinomial(const std::vector<int>& mult) {
    int n = 0;
    for (std::size_t i = 1; i < mult.size(); ++i) n += static_cast<int>(i) * mult[i];
    if (n > 20) throw capacity_error("partition_multinomial: order too large for exact arithmetic");
    auto fact = [](int k) {
        std::uint64_t r = 1;
        for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
        return r;
    };
    std::uint64_t num = fact(n);
    std::uint64_t den = 1;
    for (std::size_t i = 1; i < mult.size(); ++i) {
        int li = mult[i];
        if (li == 0) continue;
        den *= fact(li);
        std::uint64_t fi = fact(static_cast<int>(i));
        for (int k = 0; k < li; ++k) den *= fi;
    }
    return num / den;
}

} // namespace selberg
