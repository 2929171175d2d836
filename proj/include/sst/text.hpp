#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sst {

/// Text position, 1-based. Position 0 is used only as "empty prefix".
using Pos = std::uint64_t;

/// Thrown when caller-supplied data violates a documented precondition.
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an internal consistency check fails (verify mode, validation).
class InvariantError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Read-only view of the text T = t_1 ... t_n as bytes.
///
/// Non-owning: the caller keeps the underlying storage alive for the lifetime
/// of every index built over it.
class Text
{
public:
    Text() = default;
    explicit Text(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
    explicit Text(std::string_view s)
        : bytes_(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())
    {}

    Pos size() const { return bytes_.size(); }
    bool empty() const { return bytes_.empty(); }

    /// t_i for 1 <= i <= n, unchecked.
    std::uint8_t operator[](Pos i) const { return bytes_[i - 1]; }

    std::uint8_t at(Pos i) const
    {
        if (i < 1 || i > size())
            throw InputError("position " + std::to_string(i) + " out of range [1," +
                             std::to_string(size()) + "]");
        return bytes_[i - 1];
    }

    /// Length of the suffix T_i (0 for i = n + 1).
    Pos suffix_length(Pos i) const { return size() + 1 - i; }

    std::span<const std::uint8_t> bytes() const { return bytes_; }

    /// T_{first..last}, 1-based inclusive; empty when first > last.
    std::string_view substr(Pos first, Pos last) const
    {
        if (first > last)
            return {};
        return {reinterpret_cast<const char*>(bytes_.data()) + (first - 1), last - first + 1};
    }

private:
    std::span<const std::uint8_t> bytes_;
};

inline void check_position(const Text& text, Pos i)
{
    if (i < 1 || i > text.size())
        throw InputError("position " + std::to_string(i) + " out of range [1," +
                         std::to_string(text.size()) + "]");
}

} // namespace sst
