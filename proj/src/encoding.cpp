#include "snnevo/encoding.hpp"

#include <algorithm>
#include <stdexcept>

namespace snnevo {

std::pair<double, double> binary_to_rates(int bit, const RateRange& range) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    return bit == 1 ? std::pair{range.high_hz, range.low_hz}
                    : std::pair{range.low_hz, range.high_hz};
}

double sigmoid_rate(double x, const ReceptorParams& p) {
    return p.h / (1.0 + std::exp(-p.omega * (x - p.z))) + p.l;
}

double gaussian_rate(double x, const ReceptorParams& p) {
    const double d = x - p.mu;
    return p.h * std::exp(-(d * d) / (2.0 * p.sigma * p.sigma)) + p.l;
}

double receptor_rate(double x, const ReceptorParams& p) {
    return p.kind == ReceptorParams::Kind::sigmoid ? sigmoid_rate(x, p) : gaussian_rate(x, p);
}

static void encode_triple(double x, double omega, double z, double sigma, double h, double l,
                          double* out) {
    ReceptorParams s1{ReceptorParams::Kind::sigmoid, -omega, -z, 0, 1, h, l};
    ReceptorParams g{ReceptorParams::Kind::gaussian, 0, 0, 0.0, sigma, h, l};
    ReceptorParams s3{ReceptorParams::Kind::sigmoid, omega, z, 0, 1, h, l};
    out[0] = sigmoid_rate(x, s1);
    out[1] = gaussian_rate(x, g);
    out[2] = sigmoid_rate(x, s3);
}

std::array<double, 12> observation_to_rates(const std::array<double, 4>& obs,
                                            const ObservationEncoderConfig& cfg) {
    const auto clip = [](double v, double lim) { return std::clamp(v, -lim, lim); };
    const double x = obs[0] / cfg.position_scale;
    const double x_dot = clip(obs[1], cfg.velocity_clip) / cfg.velocity_scale;
    const double theta = obs[2];
    const double theta_dot = clip(obs[3], cfg.velocity_clip) / cfg.velocity_scale;

    std::array<double, 12> rates{};
    encode_triple(x, cfg.triple_omega, cfg.triple_z, cfg.triple_sigma, cfg.h, cfg.l, &rates[0]);
    encode_triple(x_dot, cfg.triple_omega, cfg.triple_z, cfg.triple_sigma, cfg.h, cfg.l,
                  &rates[3]);
    encode_triple(theta, cfg.angle_omega, cfg.angle_z, cfg.angle_sigma, cfg.h, cfg.l, &rates[6]);
    encode_triple(theta_dot, cfg.triple_omega, cfg.triple_z, cfg.triple_sigma, cfg.h, cfg.l,
                  &rates[9]);
    return rates;
}

} // namespace snnevo
