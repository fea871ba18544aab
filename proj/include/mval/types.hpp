#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mval {

enum class Label : std::uint8_t { negative = 0, positive = 1 };

inline constexpr int to_int(Label y) { return static_cast<int>(y); }
inline constexpr Label to_label(bool positive) { return positive ? Label::positive : Label::negative; }

enum class View : std::uint8_t { first = 1, second = 2 };

inline constexpr int view_index(View v) { return v == View::first ? 0 : 1; }
inline constexpr View other(View v) { return v == View::first ? View::second : View::first; }

// h+ predicts 1 only where both views say 1; h- predicts 0 only where both say 0.
enum class Combination : std::uint8_t { plus, minus };

const char* to_string(Combination c);

struct ClusterPair {
    std::size_t a = 0;  // view-1 cluster
    std::size_t b = 0;  // view-2 cluster

    friend bool operator==(const ClusterPair&, const ClusterPair&) = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A cluster with zero marginal mass has no defined conditional label probability.
class DegenerateCluster : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Raised when a label is requested twice; cost accounting must stay exact.
class DoubleQuery : public Error {
public:
    using Error::Error;
};

}  // namespace mval
