#include "compnovel/network.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace compnovel {

NetworkParseError::NetworkParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

Comparator canonicalize(unsigned first, unsigned second, unsigned lines)
{
    if (first == second) {
        throw InvalidComparator("comparator legs must differ (both " + std::to_string(first) + ")");
    }
    if (first >= lines || second >= lines) {
        throw InvalidComparator("comparator (" + std::to_string(first) + ", " + std::to_string(second) +
                                ") out of range for " + std::to_string(lines) + " lines");
    }
    if (first > second) {
        std::swap(first, second);
    }
    return {static_cast<std::uint8_t>(first), static_cast<std::uint8_t>(second)};
}

Comparator pair_at(unsigned lines, std::size_t index)
{
    if (index >= pair_count(lines)) {
        throw std::out_of_range("pair index out of range");
    }
    unsigned first = 0;
    std::size_t row = lines - 1;
    while (index >= row) {
        index -= row;
        ++first;
        --row;
    }
    return {static_cast<std::uint8_t>(first), static_cast<std::uint8_t>(first + 1 + index)};
}

Network::Network(unsigned lines, std::vector<Comparator> comparators)
    : lines_(lines), comparators_(std::move(comparators))
{
    validate();
}

void Network::validate() const
{
    if (lines_ < 2 || lines_ > kMaxLines) {
        throw std::invalid_argument("line count " + std::to_string(lines_) + " outside [2, 32]");
    }
    if (comparators_.size() > kMaxComparators) {
        throw std::invalid_argument("network has " + std::to_string(comparators_.size()) +
                                    " comparators, limit is 100");
    }
    for (const auto& cmp : comparators_) {
        if (cmp.first >= cmp.second || cmp.second >= lines_) {
            throw InvalidComparator("non-canonical or out-of-range comparator (" + std::to_string(cmp.first) + ", " +
                                    std::to_string(cmp.second) + ")");
        }
    }
}

std::size_t NetworkHash::operator()(const Network& net) const noexcept
{
    // FNV-1a over (lines, legs...)
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint8_t>(net.lines()));
    for (const auto& cmp : net.comparators()) {
        mix(cmp.first);
        mix(cmp.second);
    }
    return static_cast<std::size_t>(h);
}

Layering compute_layers(const Network& net)
{
    Layering out;
    std::uint32_t used = 0;
    for (const auto& cmp : net.comparators()) {
        const std::uint32_t legs = (1U << cmp.first) | (1U << cmp.second);
        if (out.groups.empty() || (used & legs) != 0) {
            out.groups.emplace_back();
            used = 0;
        }
        out.groups.back().push_back(cmp);
        used |= legs;
    }
    out.count = out.groups.size();
    return out;
}

std::size_t layer_count(const Network& net)
{
    std::size_t count = 0;
    std::uint32_t used = 0;
    for (const auto& cmp : net.comparators()) {
        const std::uint32_t legs = (1U << cmp.first) | (1U << cmp.second);
        if (count == 0 || (used & legs) != 0) {
            ++count;
            used = 0;
        }
        used |= legs;
    }
    return count;
}

namespace {

// Bit k of pattern i is bit i of k, i.e. the value on line i for input k.
constexpr std::array<std::uint64_t, 6> kLowLinePatterns = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

} // namespace

Evaluation evaluate(const Network& net)
{
    const unsigned n = net.lines();
    Evaluation ev;
    ev.comparators = static_cast<std::uint32_t>(net.size());
    ev.layers = static_cast<std::uint32_t>(layer_count(net));
    ev.behavior.assign(n, 0);

    const std::uint64_t inputs = std::uint64_t{1} << n;
    const std::uint64_t blocks = inputs <= 64 ? 1 : inputs / 64;
    const std::uint64_t valid = inputs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << inputs) - 1;

    std::array<std::uint64_t, kMaxLines> line{};
    for (std::uint64_t block = 0; block < blocks; ++block) {
        for (unsigned i = 0; i < n; ++i) {
            line[i] = i < 6 ? kLowLinePatterns[i] : (((block >> (i - 6)) & 1U) ? ~std::uint64_t{0} : 0);
        }
        for (const auto& cmp : net.comparators()) {
            const std::uint64_t hi = line[cmp.first];
            const std::uint64_t lo = line[cmp.second];
            const auto swaps = static_cast<std::uint64_t>(std::popcount(~hi & lo & valid));
            ev.behavior[cmp.first] += swaps;
            ev.behavior[cmp.second] += swaps;
            line[cmp.first] = hi | lo;
            line[cmp.second] = hi & lo;
        }
        std::uint64_t unsorted = 0;
        for (unsigned i = 0; i + 1 < n; ++i) {
            unsorted |= ~line[i] & line[i + 1];
        }
        ev.mistakes += static_cast<std::uint64_t>(std::popcount(unsorted & valid));
    }
    return ev;
}

std::uint64_t count_mistakes(const Network& net) { return evaluate(net).mistakes; }

std::vector<std::uint64_t> behavior_vector(const Network& net) { return evaluate(net).behavior; }

void write_network(std::ostream& os, const Network& net)
{
    os << "lines " << net.lines() << '\n';
    for (const auto& cmp : net.comparators()) {
        os << unsigned{cmp.first} << ' ' << unsigned{cmp.second} << '\n';
    }
}

std::string serialize(const Network& net)
{
    std::ostringstream os;
    write_network(os, net);
    return os.str();
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

unsigned parse_uint(std::string_view tok, std::size_t lineno)
{
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw NetworkParseError(lineno, "expected unsigned integer, got '" + std::string(tok) + "'");
    }
    return value;
}

} // namespace

Network parse_network(std::string_view text)
{
    std::optional<unsigned> lines;
    std::vector<Comparator> comparators;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view row = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (auto hash = row.find('#'); hash != std::string_view::npos) {
            row = row.substr(0, hash);
        }
        const auto tokens = split_ws(row);
        if (tokens.empty()) {
            if (eol == text.size()) {
                break;
            }
            continue;
        }
        if (!lines) {
            if (tokens.size() != 2 || tokens[0] != "lines") {
                throw NetworkParseError(lineno, "expected 'lines <n>' header");
            }
            const unsigned n = parse_uint(tokens[1], lineno);
            if (n < 2 || n > kMaxLines) {
                throw NetworkParseError(lineno, "line count must be in [2, 32]");
            }
            lines = n;
        } else {
            if (tokens.size() != 2) {
                throw NetworkParseError(lineno, "expected '<first> <second>'");
            }
            try {
                comparators.push_back(canonicalize(parse_uint(tokens[0], lineno), parse_uint(tokens[1], lineno), *lines));
            } catch (const InvalidComparator& e) {
                throw NetworkParseError(lineno, e.what());
            }
            if (comparators.size() > kMaxComparators) {
                throw NetworkParseError(lineno, "more than 100 comparators");
            }
        }
        if (eol == text.size()) {
            break;
        }
    }
    if (!lines) {
        throw NetworkParseError(lineno, "missing 'lines <n>' header");
    }
    return Network(*lines, std::move(comparators));
}

Network read_network_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open network file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

} // namespace compnovel
