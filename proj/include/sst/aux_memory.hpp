#pragma once

#include <cstddef>
#include <cstdint>
#include <new>
#include <vector>

// Working-space accounting in machine words.
//
// Construction data structures allocate through aux::Allocator, which charges
// every allocation to the meter installed on the current thread (if any).
// The text itself is never charged.

namespace sst::aux {

constexpr std::size_t word_bytes = sizeof(std::uint64_t);

class Meter
{
public:
    void charge(std::size_t bytes)
    {
        current_ += words(bytes);
        if (current_ > peak_)
            peak_ = current_;
    }

    void release(std::size_t bytes) { current_ -= words(bytes); }

    std::size_t current_words() const { return current_; }
    std::size_t peak_words() const { return peak_; }

    void reset_peak() { peak_ = current_; }

private:
    static std::size_t words(std::size_t bytes) { return (bytes + word_bytes - 1) / word_bytes; }

    std::size_t current_ = 0;
    std::size_t peak_ = 0;
};

namespace detail {
inline Meter*& active_meter()
{
    thread_local Meter* meter = nullptr;
    return meter;
}
} // namespace detail

inline Meter* active() { return detail::active_meter(); }

/// Installs a meter for the current thread until destroyed. Nests.
class Scope
{
public:
    explicit Scope(Meter& meter) : previous_(detail::active_meter())
    {
        detail::active_meter() = &meter;
    }
    ~Scope() { detail::active_meter() = previous_; }

    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

private:
    Meter* previous_;
};

// Charges whichever meter is active at allocation time and releases against
// the meter active at deallocation time; keep a container's lifetime inside
// one Scope when measuring.
template <typename T>
struct Allocator
{
    using value_type = T;

    Allocator() noexcept = default;
    template <typename U>
    Allocator(const Allocator<U>&) noexcept
    {}

    T* allocate(std::size_t count)
    {
        const std::size_t bytes = count * sizeof(T);
        T* p = static_cast<T*>(::operator new(bytes));
        if (Meter* m = active())
            m->charge(bytes);
        return p;
    }

    void deallocate(T* p, std::size_t count) noexcept
    {
        if (Meter* m = active())
            m->release(count * sizeof(T));
        ::operator delete(p);
    }

    template <typename U>
    bool operator==(const Allocator<U>&) const noexcept
    {
        return true;
    }
};

template <typename T>
using vector = std::vector<T, Allocator<T>>;

} // namespace sst::aux
