#pragma once

#include <cstdint>
#include <vector>

namespace hiqa {

// Integer sample window [start, end], inclusive at both ends. Sample
// indices are 1-based observation numbers; there are no physical units.
struct SampleWindow {
    int start = 1;
    int end = 1;

    int length() const { return end - start + 1; }
    bool contains(int t) const { return t >= start && t <= end; }
    bool operator==(const SampleWindow&) const = default;
};

// A time-indexed health-index series starting at sample `start`.
struct Trajectory {
    int start = 1;
    std::vector<double> values;

    int end() const { return start + static_cast<int>(values.size()) - 1; }
    SampleWindow window() const { return {start, end()}; }
};

// n prognosed trajectories over a common prediction window.
struct PrognosisEnsemble {
    SampleWindow window;
    std::vector<std::vector<double>> trajectories;

    int size() const { return static_cast<int>(trajectories.size()); }
    int length() const { return window.length(); }
};

// Throws std::invalid_argument unless n >= 2, every member matches the
// window length and every value is finite.
void validate(const PrognosisEnsemble& ensemble);

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable child seed for stream `index` under `master`. Stream i always sees
// the same seed no matter in which order (or on how many threads) the
// streams are drawn.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index));
}

}  // namespace hiqa
