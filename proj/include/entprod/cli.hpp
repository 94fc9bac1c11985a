#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entprod/channels.hpp"
#include "entprod/witness.hpp"

namespace entprod::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheckFailure = 4;

// Name of the environment variable holding a default config path.
inline constexpr const char* kConfigEnv = "ENTPROD_CONFIG";

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SweepSpec {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    std::string spacing = "linear";
};

/// Fully resolved settings for one command. Optional members that stay unset
/// fall back to model-dependent defaults during `resolve`.
struct RunConfig {
    std::string model;
    double s = 1.0;
    double omega_c = 1.0;
    double lambda = 0.05;
    double gamma0 = 1.0;
    double omega = 5.0;
    std::optional<double> t_max;
    int steps = 800;
    std::string initial = "bell";
    double alpha = 0.0;
    std::array<double, 3> basis{0.0, 0.0, 0.0};
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    int jobs = 1;
    int starts = 16;
    int evaluations = 200;
    std::vector<double> times;
    bool full_grid = false;
    bool corrupt_kraus = false;
    std::optional<SweepSpec> sweep;

    ChannelModel channel_model() const;
    TimeGrid grid() const;
    InitialStateParam initial_param() const;
};

/// Throws InvalidConfig when any field is out of range.
void validate(const RunConfig& cfg, const std::string& command);

/// Overlays the keys of a JSON config document onto `cfg`; unknown keys and
/// ill-typed values raise InvalidConfig.
void apply_json_config(RunConfig& cfg, const std::string& json_text);

/// The resolved configuration as a single-line JSON document.
std::string config_json(const RunConfig& cfg, const std::string& command);

std::string simulate_csv(const RunConfig& cfg, const std::vector<TrajectoryRecord>& records);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entprod::cli
