#ifndef SNNEVO_ENCODING_HPP
#define SNNEVO_ENCODING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

namespace snnevo {

struct RateRange {
    double low_hz = 5.0;
    double high_hz = 50.0;
};

/// One-hot rate coding of a bit: 1 -> (high, low), 0 -> (low, high).
std::pair<double, double> binary_to_rates(int bit, const RateRange& range);

/// Uniform spike generator: evenly spaced spikes with the period rounded to
/// whole steps. A rate change re-anchors the train at the step of the change
/// plus an optional phase offset; rate 0 is silent. Per-channel phase offsets
/// keep equal-rate channels from firing in lockstep.
class SpikeTrainGenerator {
public:
    explicit SpikeTrainGenerator(double dt_ms = 0.1) : dt_ms_(dt_ms) {}

    void set_rate(double rate_hz, std::int64_t now_step, std::int64_t phase_steps = 0) {
        if (rate_hz == rate_hz_) return;
        rate_hz_ = rate_hz;
        period_ = rate_hz > 0.0
                      ? std::max<std::int64_t>(1, std::llround(1000.0 / rate_hz / dt_ms_))
                      : 0;
        next_ = now_step + (period_ > 0 ? phase_steps % period_ : 0);
    }

    void reset_phase(std::int64_t now_step, std::int64_t phase_steps = 0) {
        next_ = now_step + (period_ > 0 ? phase_steps % period_ : 0);
    }

    double rate() const { return rate_hz_; }
    std::int64_t period_steps() const { return period_; }

    bool step(std::int64_t t) {
        if (period_ == 0) return false;
        if (t >= next_) {
            next_ = t + period_;
            return true;
        }
        return false;
    }

private:
    double dt_ms_;
    double rate_hz_ = -1.0;
    std::int64_t period_ = 0;
    std::int64_t next_ = 0;
};

struct ReceptorParams {
    enum class Kind : std::uint8_t { sigmoid, gaussian };
    Kind kind = Kind::sigmoid;
    double omega = 0.0;  // sigmoid steepness
    double z = 0.0;      // sigmoid shift
    double mu = 0.0;     // gaussian mean
    double sigma = 1.0;  // gaussian width
    double h = 45.0;     // rate span
    double l = 5.0;      // rate floor
};

double sigmoid_rate(double x, const ReceptorParams& p);
double gaussian_rate(double x, const ReceptorParams& p);
double receptor_rate(double x, const ReceptorParams& p);

/// Receptor triples and input scaling for the cart-pole observation. Each of
/// the four observation values feeds three receptor neurons.
struct ObservationEncoderConfig {
    // triple used for cart position, cart velocity and pole angular velocity
    double triple_omega = 2.5;
    double triple_z = 0.6;
    double triple_sigma = 0.4;
    // triple used for the pole angle (raw radians)
    double angle_omega = 60.0;
    double angle_z = 0.05;
    double angle_sigma = 0.05;
    double h = 45.0;
    double l = 5.0;
    // observation scaling
    double position_scale = 2.4;
    double velocity_clip = 2.0;
    double velocity_scale = 2.0;
};

/// (x, x_dot, theta, theta_dot) -> 12 firing rates, triples in input order.
std::array<double, 12> observation_to_rates(const std::array<double, 4>& obs,
                                            const ObservationEncoderConfig& cfg = {});

constexpr int kNoAction = -1;

/// Actuator read-out: strict maximum wins; on a tie the output that most
/// recently held a strict lead wins; before any strict lead, no action.
class ActionDecoder {
public:
    int decide(std::span<const int> counts) {
        int best = 0;
        bool strict = true;
        for (int i = 1; i < static_cast<int>(counts.size()); ++i) {
            if (counts[i] > counts[best]) {
                best = i;
                strict = true;
            } else if (counts[i] == counts[best]) {
                strict = false;
            }
        }
        if (strict && !counts.empty()) {
            last_leader_ = best;
            return best;
        }
        return last_leader_;
    }

    int last_leader() const { return last_leader_; }

private:
    int last_leader_ = kNoAction;
};

} // namespace snnevo

#endif
