#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "flowgate/synth.hpp"

namespace flowgate {
namespace {

constexpr std::array<const char*, 24> kFlowColumns = {
    "Flow Duration",          "Total Fwd Packets",      "Total Backward Packets", "Fwd Packet Length Mean",
    "Bwd Packet Length Mean", "Flow Bytes/s",           "Flow Packets/s",         "Flow IAT Mean",
    "Flow IAT Std",           "Fwd IAT Mean",           "Bwd IAT Mean",           "Packet Length Mean",
    "Packet Length Std",      "Average Packet Size",    "Init_Win_bytes_forward", "Init_Win_bytes_backward",
    "ACK Flag Count",         "SYN Flag Count",         "URG Flag Count",         "Down/Up Ratio",
    "Subflow Fwd Bytes",      "Subflow Bwd Bytes",      "Active Mean",            "Idle Mean",
};

constexpr std::array<const char*, 4> kCategoricalColumns = {"Protocol", "Service", "Flag State", "Direction"};
constexpr std::array<const char*, 5> kCategories = {"TCP", "UDP", "ICMP", "GRE", "SCTP"};

std::string numeric_name(std::size_t i) {
    std::string name = kFlowColumns[i % kFlowColumns.size()];
    if (i >= kFlowColumns.size()) name += " " + std::to_string(i / kFlowColumns.size() + 1);
    return name;
}

std::string categorical_name(std::size_t i) {
    std::string name = kCategoricalColumns[i % kCategoricalColumns.size()];
    if (i >= kCategoricalColumns.size()) name += " " + std::to_string(i / kCategoricalColumns.size() + 1);
    return name;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void validate_spec(const SynthSpec& spec) {
    auto require = [](bool ok, const char* message) {
        if (!ok) throw std::invalid_argument(std::string("synth: ") + message);
    };
    require(spec.n_benign + spec.n_attack > 0, "at least one row is required");
    require(spec.n_numeric_features >= 1, "n_numeric_features must be positive");
    require(std::isfinite(spec.class_separation) && spec.class_separation >= 0.0, "class_separation must be >= 0");
    require(spec.null_rate >= 0.0 && spec.null_rate < 1.0, "null_rate must lie in [0, 1)");
    require(spec.inf_rate >= 0.0 && spec.inf_rate < 1.0, "inf_rate must lie in [0, 1)");
    require(spec.null_rate + spec.inf_rate < 1.0, "null_rate + inf_rate must be below 1");
    require(spec.feature_correlation >= 0.0 && spec.feature_correlation < 1.0,
            "feature_correlation must lie in [0, 1)");
    require(std::isfinite(spec.scale_ratio) && spec.scale_ratio >= 1.0, "scale_ratio must be >= 1");
    require(spec.separation_decay > 0.0 && spec.separation_decay <= 1.0, "separation_decay must lie in (0, 1]");
    require(spec.attack_modes == 1 || spec.attack_modes == 2, "attack_modes must be 1 or 2");
}

SynthResult generate(const SynthSpec& spec) {
    validate_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const std::size_t n = spec.n_benign + spec.n_attack;
    const std::size_t k = spec.n_numeric_features;

    SynthResult out;
    out.labels.assign(spec.n_benign, kBenign);
    out.labels.insert(out.labels.end(), spec.n_attack, kAttack);
    std::shuffle(out.labels.begin(), out.labels.end(), rng);

    std::vector<double> shift(k);
    double norm = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        shift[j] = std::pow(spec.separation_decay, static_cast<double>(j));
        norm += shift[j] * shift[j];
    }
    for (auto& s : shift) s *= spec.class_separation / std::sqrt(norm);
    const double shared = std::sqrt(spec.feature_correlation);
    const double own = std::sqrt(1.0 - spec.feature_correlation);

    // Informative features: offset + class shift + shared latent + own noise.
    Matrix informative(n, k);
    for (std::size_t r = 0; r < n; ++r) {
        double sign = 1.0;
        if (out.labels[r] == kAttack && spec.attack_modes == 2) sign = uniform(rng) < 0.5 ? -1.0 : 1.0;
        const double direction = out.labels[r] == kAttack ? sign : 0.0;
        const double latent = normal(rng);
        double scale = 1.0;
        for (std::size_t j = 0; j < k; ++j, scale *= spec.scale_ratio) {
            informative(r, j) = scale * (10.0 * static_cast<double>(j + 1) + direction * shift[j] + shared * latent + own * normal(rng));
        }
    }

    Matrix noise(n, spec.n_noise_columns);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < spec.n_noise_columns; ++j) noise(r, j) = normal(rng);
    }
    if (spec.decorrelate_noise && spec.n_benign > 0 && spec.n_attack > 0) {
        for (std::size_t j = 0; j < spec.n_noise_columns; ++j) {
            std::array<double, 2> sum{0.0, 0.0};
            for (std::size_t r = 0; r < n; ++r) sum[out.labels[r]] += noise(r, j);
            const std::array<double, 2> mean{sum[0] / static_cast<double>(spec.n_benign),
                                             sum[1] / static_cast<double>(spec.n_attack)};
            for (std::size_t r = 0; r < n; ++r) noise(r, j) -= mean[out.labels[r]];
        }
    }

    auto& table = out.table;
    const std::size_t numeric_columns = k + spec.n_noise_columns + spec.n_constant_columns;
    for (std::size_t i = 0; i < numeric_columns; ++i) table.headers.push_back(numeric_name(i));
    for (std::size_t i = 0; i < spec.n_categorical_columns; ++i) table.headers.push_back(categorical_name(i));
    table.headers.emplace_back("Label");
    for (std::size_t j = 0; j < k; ++j) out.informative.push_back(j);

    table.rows.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto& row = table.rows[r];
        row.reserve(table.headers.size());
        for (std::size_t c = 0; c < numeric_columns; ++c) {
            const double u = uniform(rng);
            if (u < spec.null_rate) {
                row.emplace_back(uniform(rng) < 0.5 ? "" : "NaN");
                continue;
            }
            if (u < spec.null_rate + spec.inf_rate) {
                row.emplace_back(uniform(rng) < 0.5 ? "inf" : "Infinity");
                continue;
            }
            double value = 0.0;
            if (c < k) value = informative(r, c);
            else if (c < k + spec.n_noise_columns) value = 50.0 + 5.0 * noise(r, c - k);
            else value = static_cast<double>(7 * (c - k - spec.n_noise_columns + 1));
            row.push_back(format_value(value));
        }
        for (std::size_t c = 0; c < spec.n_categorical_columns; ++c) {
            std::uniform_int_distribution<std::size_t> pick(0, 2 + c % 3);
            row.emplace_back(kCategories[pick(rng)]);
        }
        row.emplace_back(out.labels[r] == kAttack ? "Attack" : "BENIGN");
    }
    return out;
}

}  // namespace flowgate
