#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tilelab/embedding.hpp"
#include "tilelab/semantics.hpp"

namespace tilelab {

inline constexpr std::size_t kAffordanceCount = 5;

// Multi-hot target ordered (Characters, Environmental Object,
// Interactive Object, Items and Collectibles, Terrain).
struct MultiHotTarget {
    std::array<bool, kAffordanceCount> bits{};

    static MultiHotTarget from_labels(const std::set<Affordance>& labels) {
        MultiHotTarget t;
        for (Affordance a : labels) t.bits[static_cast<std::size_t>(a)] = true;
        return t;
    }
};

// One ReLU hidden layer, sigmoid output head.
struct AffordanceModel {
    std::size_t input_dim = 0;
    std::size_t hidden_size = 0;
    std::vector<double> w1;  // hidden_size x input_dim, row-major
    std::vector<double> b1;  // hidden_size
    std::vector<double> w2;  // kAffordanceCount x hidden_size, row-major
    std::vector<double> b2;  // kAffordanceCount

    static AffordanceModel zeros(std::size_t input_dim, std::size_t hidden_size);
};

struct TrainingExample {
    EmbeddingVector input;
    MultiHotTarget target;
};

std::array<double, kAffordanceCount> forward(const AffordanceModel& model,
                                             const std::vector<double>& x);

// Mean over labels of -[t ln p + (1-t) ln(1-p)], p clamped to [1e-7, 1-1e-7].
double bce_loss(const std::array<double, kAffordanceCount>& probs,
                const MultiHotTarget& target);

struct ModelGradients {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    std::vector<double> b2;
};

// Mean BCE over the examples plus analytic gradients for every parameter.
double loss_and_gradients(const AffordanceModel& model,
                          const std::vector<TrainingExample>& examples,
                          ModelGradients& grads);

double mean_loss(const AffordanceModel& model,
                 const std::vector<TrainingExample>& examples);

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 100;
    std::size_t batch_size = 16;
    std::uint64_t seed = 0;
    double val_fraction = 0.15;
    std::size_t hidden_size = 128;
    double momentum = 0.0;
};

struct TrainResult {
    AffordanceModel model;
    std::vector<double> train_loss;  // one entry per epoch
    std::vector<double> val_loss;    // empty when there is no validation split
};

// Mini-batch gradient descent on mean BCE, He-style init, deterministic
// given the seed.
TrainResult train(const std::vector<TrainingExample>& dataset,
                  const TrainConfig& config);

// Labels whose probability >= threshold; may be empty.
std::set<Affordance> predict(const AffordanceModel& model,
                             const EmbeddingVector& x, double threshold = 0.5);

struct PerLabelMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct LabelMetrics {
    std::array<PerLabelMetrics, kAffordanceCount> per_label{};
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

LabelMetrics evaluate(const AffordanceModel& model,
                      const std::vector<TrainingExample>& test_set,
                      double threshold = 0.5);

}  // namespace tilelab
