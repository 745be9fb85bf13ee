#include "hiqa/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hiqa {

void validate(const PrognosisEnsemble& ensemble) {
    if (ensemble.size() < 2) {
        throw std::invalid_argument("ensemble needs at least 2 trajectories, got " +
                                    std::to_string(ensemble.size()));
    }
    if (ensemble.window.length() < 1) {
        throw std::invalid_argument("ensemble window is empty");
    }
    const auto expected = static_cast<std::size_t>(ensemble.window.length());
    for (std::size_t i = 0; i < ensemble.trajectories.size(); ++i) {
        const auto& values = ensemble.trajectories[i];
        if (values.size() != expected) {
            throw std::invalid_argument("trajectory " + std::to_string(i + 1) + " has length " +
                                        std::to_string(values.size()) + ", expected " +
                                        std::to_string(expected));
        }
        for (double v : values) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("trajectory " + std::to_string(i + 1) +
                                            " contains a non-finite value");
            }
        }
    }
}

}  // namespace hiqa
