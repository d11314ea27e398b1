#pragma once

#include <stdexcept>
#include <string>

namespace beamsense {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested vehicle count cannot be placed inside the canyon.
struct InfeasibleDrop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Radar return below the usable detection threshold.
struct TargetTooWeak : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two spectra evaluated on different azimuth grids.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CampaignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace beamsense
