#pragma once

#include <cstdint>

namespace spiralbrick {

/// splitmix64 finalizer; used to derive independent seeds so that retries
/// or reordering never shift another consumer's random stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    return splitmix64(base ^ splitmix64(stream ^ splitmix64(index)));
}

}  // namespace spiralbrick
