#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rtopmap {

// Index into a TopicLexicon. Serialized as "t<index>".
struct TopicId {
    std::uint32_t value = 0;

    auto operator<=>(const TopicId&) const = default;

    std::string str() const { return "t" + std::to_string(value); }
    static std::optional<TopicId> parse(std::string_view s);
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Deterministic random source. Only raw engine output is consumed so that
// results do not depend on the standard library's distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);
    bool chance(double p) { return uniform() < p; }
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace rtopmap

template <>
struct std::hash<rtopmap::TopicId> {
    std::size_t operator()(const rtopmap::TopicId& id) const noexcept {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
