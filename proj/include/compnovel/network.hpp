#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace compnovel {

/// Largest supported line count; line masks fit one 32-bit word.
inline constexpr unsigned kMaxLines = 32;
/// Bound on comparators (and therefore layers) keeping the hierarchical fitness unfolded.
inline constexpr std::size_t kMaxComparators = 100;

class InvalidComparator : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NetworkParseError : public std::runtime_error {
public:
    NetworkParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Two-leg comparator in canonical form (first < second). Applying it moves
/// the larger value onto `first`, the lower-indexed line.
struct Comparator {
    std::uint8_t first = 0;
    std::uint8_t second = 1;

    friend bool operator==(const Comparator&, const Comparator&) = default;
    friend auto operator<=>(const Comparator&, const Comparator&) = default;
};

/// Builds a canonical comparator from two legs given in either order.
/// Throws InvalidComparator for equal legs or a leg >= lines.
Comparator canonicalize(unsigned first, unsigned second, unsigned lines = kMaxLines);

/// Number of distinct canonical comparators on `lines` lines.
constexpr std::size_t pair_count(unsigned lines) noexcept { return std::size_t{lines} * (lines - 1) / 2; }

/// Maps an index in [0, pair_count(lines)) onto a canonical comparator, row-major over first.
Comparator pair_at(unsigned lines, std::size_t index);

class Network {
public:
    Network() = default;
    explicit Network(unsigned lines, std::vector<Comparator> comparators = {});

    unsigned lines() const noexcept { return lines_; }
    std::size_t size() const noexcept { return comparators_.size(); }
    bool empty() const noexcept { return comparators_.empty(); }

    const std::vector<Comparator>& comparators() const noexcept { return comparators_; }
    const Comparator& operator[](std::size_t i) const { return comparators_[i]; }

    /// Checks every invariant; throws InvalidComparator / std::invalid_argument on violation.
    void validate() const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    unsigned lines_ = 2;
    std::vector<Comparator> comparators_;
};

struct NetworkHash {
    std::size_t operator()(const Network& net) const noexcept;
};

struct Layering {
    std::size_t count = 0;
    std::vector<std::vector<Comparator>> groups;
};

/// Greedy left-to-right layer grouping: a comparator opens a new layer
/// when one of its lines is already used by the current layer.
Layering compute_layers(const Network& net);
std::size_t layer_count(const Network& net);

struct Evaluation {
    std::uint64_t mistakes = 0;
    std::uint32_t layers = 0;
    std::uint32_t comparators = 0;
    /// Per-line count of value exchanges over all zero-one inputs.
    std::vector<std::uint64_t> behavior;

    friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// Exhaustive zero-one simulation. Outputs are sorted when line values are
/// non-increasing from line 0 downward. Bit-parallel over 64 inputs per word.
Evaluation evaluate(const Network& net);
std::uint64_t count_mistakes(const Network& net);
std::vector<std::uint64_t> behavior_vector(const Network& net);

/// Applies the network in place to an arbitrary value vector of size lines().
template <typename T>
void apply(const Network& net, std::vector<T>& values)
{
    for (const auto& cmp : net.comparators()) {
        auto& hi = values[cmp.first];
        auto& lo = values[cmp.second];
        if (hi < lo) {
            std::swap(hi, lo);
        }
    }
}

// Text format: "lines <n>" then one "<first> <second>" per comparator.
// Blank lines and '#' comments are ignored.
std::string serialize(const Network& net);
void write_network(std::ostream& os, const Network& net);
Network parse_network(std::string_view text);
Network read_network_file(const std::string& path);

} // namespace compnovel
