#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flowgate/dataio.hpp"

namespace flowgate {

// Shape of a synthetic flow table. Informative features are class-conditional
// Gaussians with unit within-class variance (before scaling); the attack mean
// is offset so the Euclidean distance between class means is class_separation.
struct SynthSpec {
    std::size_t n_benign = 1000;
    std::size_t n_attack = 9000;
    std::size_t n_numeric_features = 4;
    double class_separation = 6.0;
    double null_rate = 0.0;
    double inf_rate = 0.0;
    std::size_t n_constant_columns = 0;
    std::size_t n_noise_columns = 0;
    std::size_t n_categorical_columns = 0;
    std::uint64_t seed = 1;

    // Within-class correlation between every pair of informative features,
    // induced by a shared latent factor. Must lie in [0, 1).
    double feature_correlation = 0.0;
    // 2 places attack rows at +offset or -offset with equal probability.
    int attack_modes = 1;
    // Re-centre noise columns per class so their in-sample correlation with
    // the label is zero before dirt injection.
    bool decorrelate_noise = true;
    // Informative feature j is multiplied by scale_ratio^j, mimicking flow
    // features measured in unrelated units. Must be >= 1.
    double scale_ratio = 1.0;
    // Feature j carries a class shift proportional to separation_decay^j,
    // normalised so the distance between class means stays class_separation.
    // 1 spreads separation evenly. Must lie in (0, 1].
    double separation_decay = 1.0;
};

struct SynthResult {
    RawTable table;  // includes the "Label" column, last
    std::vector<int> labels;
    std::vector<std::size_t> informative;  // column indices in `table`
};

void validate_spec(const SynthSpec& spec);

SynthResult generate(const SynthSpec& spec);

}  // namespace flowgate
