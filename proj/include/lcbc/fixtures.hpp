// The five reference instances used throughout the tests and shipped by the
// CLI `examples` subcommand, plus the 2x2 binary instance whose scalar lower
// bound separates batch-one coding from the true optimum.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lcbc/instance.hpp"

namespace lcbc {

namespace detail {

inline MatrixFq cols_of(const Field& f, std::size_t d, std::vector<std::vector<std::uint64_t>> cols) {
    return MatrixFq::from_columns(f, d, cols);
}

}  // namespace detail

// 1: F3, d=3; user k holds one symbol and wants the sum of the other two.
//    One dimension serves all three users.
// 2: F3, d=3; like 1 but user 3 wants A+2B. Pairwise dimensions only; the
//    optimum needs batch size two.
// 3: F2, d=3; cyclic index-coding instance. Only the summed-pair trick works.
// 4: F2, d=2; every signal space is the whole plane, yet no scalar code at
//    batch one reaches the optimum; needs the field extension.
// 5: F3, d=5; instances 2 and a two-symbol problem glued together, cheaper
//    than solving the parts separately.
inline LcbcInstance example_instance(int which) {
    using detail::cols_of;
    switch (which) {
        case 1: {
            const Field f = FieldSpec::make(3, 1);
            std::vector<UserMatrices> users;
            users.push_back({cols_of(f, 3, {{1, 0, 0}}), cols_of(f, 3, {{0, 1, 1}})});
            users.push_back({cols_of(f, 3, {{0, 1, 0}}), cols_of(f, 3, {{1, 0, 1}})});
            users.push_back({cols_of(f, 3, {{0, 0, 1}}), cols_of(f, 3, {{1, 1, 0}})});
            return LcbcInstance(f, 3, std::move(users));
        }
        case 2: {
            const Field f = FieldSpec::make(3, 1);
            std::vector<UserMatrices> users;
            users.push_back({cols_of(f, 3, {{1, 0, 0}}), cols_of(f, 3, {{0, 1, 1}})});
            users.push_back({cols_of(f, 3, {{0, 1, 0}}), cols_of(f, 3, {{1, 0, 1}})});
            users.push_back({cols_of(f, 3, {{0, 0, 1}}), cols_of(f, 3, {{1, 2, 0}})});
            return LcbcInstance(f, 3, std::move(users));
        }
        case 3: {
            const Field f = FieldSpec::make(2, 1);
            std::vector<UserMatrices> users;
            users.push_back({cols_of(f, 3, {{1, 0, 0}}), cols_of(f, 3, {{0, 1, 0}})});
            users.push_back({cols_of(f, 3, {{0, 1, 0}}), cols_of(f, 3, {{0, 0, 1}})});
            users.push_back({cols_of(f, 3, {{0, 0, 1}}), cols_of(f, 3, {{1, 0, 0}})});
            return LcbcInstance(f, 3, std::move(users));
        }
        case 4: {
            const Field f = FieldSpec::make(2, 1);
            std::vector<UserMatrices> users;
            users.push_back({cols_of(f, 2, {{1, 0}}), cols_of(f, 2, {{0, 1}})});
            users.push_back({cols_of(f, 2, {{0, 1}}), cols_of(f, 2, {{1, 1}})});
            users.push_back({cols_of(f, 2, {{1, 1}}), cols_of(f, 2, {{1, 0}})});
            return LcbcInstance(f, 2, std::move(users));
        }
        case 5: {
            const Field f = FieldSpec::make(3, 1);
            std::vector<UserMatrices> users;
            users.push_back({cols_of(f, 5, {{1, 0, 0, 0, 0}}),
                             cols_of(f, 5, {{0, 1, 1, 0, 0}, {0, 0, 0, 1, 0}})});
            users.push_back({cols_of(f, 5, {{0, 1, 0, 0, 0}}),
                             cols_of(f, 5, {{1, 0, 1, 0, 0}, {0, 0, 0, 0, 1}})});
            users.push_back({cols_of(f, 5, {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 1}}),
                             cols_of(f, 5, {{1, 2, 0, 0, 0}})});
            return LcbcInstance(f, 5, std::move(users));
        }
        default:
            throw std::invalid_argument("example_instance: index must be 1..5");
    }
}

}  // namespace lcbc
