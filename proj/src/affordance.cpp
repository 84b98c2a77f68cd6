#include "tilelab/affordance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tilelab/errors.hpp"
#include "tilelab/rng.hpp"

namespace tilelab {

namespace {

constexpr double kClampEps = 1e-7;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double p) {
    return std::clamp(p, kClampEps, 1.0 - kClampEps);
}

}  // namespace

AffordanceModel AffordanceModel::zeros(std::size_t input_dim,
                                       std::size_t hidden_size) {
    AffordanceModel m;
    m.input_dim = input_dim;
    m.hidden_size = hidden_size;
    m.w1.assign(hidden_size * input_dim, 0.0);
    m.b1.assign(hidden_size, 0.0);
    m.w2.assign(kAffordanceCount * hidden_size, 0.0);
    m.b2.assign(kAffordanceCount, 0.0);
    return m;
}

std::array<double, kAffordanceCount> forward(const AffordanceModel& model,
                                             const std::vector<double>& x) {
    if (x.size() != model.input_dim) {
        throw std::invalid_argument("input dimension does not match model");
    }
    std::vector<double> hidden(model.hidden_size);
    for (std::size_t k = 0; k < model.hidden_size; ++k) {
        double z = model.b1[k];
        const double* row = &model.w1[k * model.input_dim];
        for (std::size_t i = 0; i < model.input_dim; ++i) z += row[i] * x[i];
        hidden[k] = z > 0.0 ? z : 0.0;
    }
    std::array<double, kAffordanceCount> probs{};
    for (std::size_t j = 0; j < kAffordanceCount; ++j) {
        double z = model.b2[j];
        const double* row = &model.w2[j * model.hidden_size];
        for (std::size_t k = 0; k < model.hidden_size; ++k) {
            z += row[k] * hidden[k];
        }
        probs[j] = sigmoid(z);
    }
    return probs;
}

double bce_loss(const std::array<double, kAffordanceCount>& probs,
                const MultiHotTarget& target) {
    double sum = 0.0;
    for (std::size_t j = 0; j < kAffordanceCount; ++j) {
        double p = clamp_prob(probs[j]);
        double t = target.bits[j] ? 1.0 : 0.0;
        sum += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    }
    return sum / static_cast<double>(kAffordanceCount);
}

double loss_and_gradients(const AffordanceModel& model,
                          const std::vector<TrainingExample>& examples,
                          ModelGradients& grads) {
    if (examples.empty()) throw std::invalid_argument("empty batch");
    grads.w1.assign(model.w1.size(), 0.0);
    grads.b1.assign(model.b1.size(), 0.0);
    grads.w2.assign(model.w2.size(), 0.0);
    grads.b2.assign(model.b2.size(), 0.0);

    const double inv_n = 1.0 / static_cast<double>(examples.size());
    const double inv_labels = 1.0 / static_cast<double>(kAffordanceCount);
    double total_loss = 0.0;

    std::vector<double> hidden(model.hidden_size);
    std::vector<double> dhidden(model.hidden_size);

    for (const TrainingExample& ex : examples) {
        const std::vector<double>& x = ex.input.values;
        if (x.size() != model.input_dim) {
            throw std::invalid_argument("input dimension does not match model");
        }
        for (std::size_t k = 0; k < model.hidden_size; ++k) {
            double z = model.b1[k];
            const double* row = &model.w1[k * model.input_dim];
            for (std::size_t i = 0; i < model.input_dim; ++i) z += row[i] * x[i];
            hidden[k] = z > 0.0 ? z : 0.0;
        }

        std::fill(dhidden.begin(), dhidden.end(), 0.0);
        std::array<double, kAffordanceCount> probs{};
        for (std::size_t j = 0; j < kAffordanceCount; ++j) {
            double z = model.b2[j];
            const double* row = &model.w2[j * model.hidden_size];
            for (std::size_t k = 0; k < model.hidden_size; ++k) {
                z += row[k] * hidden[k];
            }
            probs[j] = sigmoid(z);
        }
        total_loss += bce_loss(probs, ex.target) * inv_n;

        for (std::size_t j = 0; j < kAffordanceCount; ++j) {
            double t = ex.target.bits[j] ? 1.0 : 0.0;
            double dz = (probs[j] - t) * inv_labels * inv_n;
            grads.b2[j] += dz;
            double* w2_grad = &grads.w2[j * model.hidden_size];
            const double* w2_row = &model.w2[j * model.hidden_size];
            for (std::size_t k = 0; k < model.hidden_size; ++k) {
                w2_grad[k] += dz * hidden[k];
                dhidden[k] += dz * w2_row[k];
            }
        }
        for (std::size_t k = 0; k < model.hidden_size; ++k) {
            if (hidden[k] <= 0.0) continue;  // ReLU gate
            grads.b1[k] += dhidden[k];
            double* w1_grad = &grads.w1[k * model.input_dim];
            for (std::size_t i = 0; i < model.input_dim; ++i) {
                w1_grad[i] += dhidden[k] * x[i];
            }
        }
    }
    return total_loss;
}

double mean_loss(const AffordanceModel& model,
                 const std::vector<TrainingExample>& examples) {
    if (examples.empty()) return 0.0;
    double total = 0.0;
    for (const TrainingExample& ex : examples) {
        total += bce_loss(forward(model, ex.input.values), ex.target);
    }
    return total / static_cast<double>(examples.size());
}

TrainResult train(const std::vector<TrainingExample>& dataset,
                  const TrainConfig& config) {
    if (dataset.empty()) throw std::invalid_argument("dataset is empty");
    const std::size_t input_dim = dataset[0].input.dimension();
    for (const TrainingExample& ex : dataset) {
        if (ex.input.dimension() != input_dim) {
            throw std::invalid_argument("dataset has mixed input dimensions");
        }
        bool any = false;
        for (bool b : ex.target.bits) any = any || b;
        if (!any) {
            throw std::invalid_argument(
                "training example must carry at least one label");
        }
    }
    if (config.batch_size == 0) {
        throw std::invalid_argument("batch_size must be positive");
    }

    Rng rng(config.seed);

    TrainResult result;
    result.model = AffordanceModel::zeros(input_dim, config.hidden_size);
    // He-style initialization.
    const double s1 = std::sqrt(2.0 / static_cast<double>(input_dim));
    for (double& w : result.model.w1) w = rng.normal() * s1;
    const double s2 = std::sqrt(2.0 / static_cast<double>(config.hidden_size));
    for (double& w : result.model.w2) w = rng.normal() * s2;

    // Seeded validation split.
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::size_t val_count = static_cast<std::size_t>(
        std::floor(config.val_fraction * static_cast<double>(dataset.size())));
    std::vector<TrainingExample> val_set, train_set;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < val_count ? val_set : train_set).push_back(dataset[order[i]]);
    }
    if (train_set.empty()) {
        train_set = val_set;
        val_set.clear();
    }

    ModelGradients grads;
    ModelGradients velocity;
    velocity.w1.assign(result.model.w1.size(), 0.0);
    velocity.b1.assign(result.model.b1.size(), 0.0);
    velocity.w2.assign(result.model.w2.size(), 0.0);
    velocity.b2.assign(result.model.b2.size(), 0.0);

    auto apply = [&](std::vector<double>& param, std::vector<double>& vel,
                     const std::vector<double>& grad) {
        for (std::size_t i = 0; i < param.size(); ++i) {
            vel[i] = config.momentum * vel[i] - config.learning_rate * grad[i];
            param[i] += vel[i];
        }
    };

    std::vector<std::size_t> indices(train_set.size());
    std::iota(indices.begin(), indices.end(), 0);
    std::vector<TrainingExample> batch;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(indices);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < indices.size();
             start += config.batch_size) {
            batch.clear();
            std::size_t end =
                std::min(start + config.batch_size, indices.size());
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(train_set[indices[i]]);
            }
            double loss = loss_and_gradients(result.model, batch, grads);
            if (!std::isfinite(loss)) {
                throw DomainError("training diverged: non-finite loss at epoch " +
                                  std::to_string(epoch));
            }
            epoch_loss += loss * static_cast<double>(batch.size());
            seen += batch.size();
            apply(result.model.w1, velocity.w1, grads.w1);
            apply(result.model.b1, velocity.b1, grads.b1);
            apply(result.model.w2, velocity.w2, grads.w2);
            apply(result.model.b2, velocity.b2, grads.b2);
        }
        result.train_loss.push_back(epoch_loss / static_cast<double>(seen));
        if (!val_set.empty()) {
            result.val_loss.push_back(mean_loss(result.model, val_set));
        }
    }
    return result;
}

std::set<Affordance> predict(const AffordanceModel& model,
                             const EmbeddingVector& x, double threshold) {
    std::array<double, kAffordanceCount> probs = forward(model, x.values);
    std::set<Affordance> labels;
    for (std::size_t j = 0; j < kAffordanceCount; ++j) {
        if (probs[j] >= threshold) labels.insert(static_cast<Affordance>(j));
    }
    return labels;
}

LabelMetrics evaluate(const AffordanceModel& model,
                      const std::vector<TrainingExample>& test_set,
                      double threshold) {
    std::array<std::size_t, kAffordanceCount> tp{}, fp{}, fn{};
    for (const TrainingExample& ex : test_set) {
        std::array<double, kAffordanceCount> probs = forward(model, ex.input.values);
        for (std::size_t j = 0; j < kAffordanceCount; ++j) {
            bool predicted = probs[j] >= threshold;
            bool actual = ex.target.bits[j];
            if (predicted && actual) ++tp[j];
            else if (predicted) ++fp[j];
            else if (actual) ++fn[j];
        }
    }

    LabelMetrics metrics;
    std::size_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
    double macro_sum = 0.0;
    for (std::size_t j = 0; j < kAffordanceCount; ++j) {
        PerLabelMetrics& m = metrics.per_label[j];
        m.support = tp[j] + fn[j];
        m.precision = (tp[j] + fp[j]) > 0
                          ? static_cast<double>(tp[j]) / (tp[j] + fp[j])
                          : 0.0;
        m.recall = (tp[j] + fn[j]) > 0
                       ? static_cast<double>(tp[j]) / (tp[j] + fn[j])
                       : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        macro_sum += m.f1;
        tp_sum += tp[j];
        fp_sum += fp[j];
        fn_sum += fn[j];
    }
    metrics.macro_f1 = macro_sum / static_cast<double>(kAffordanceCount);
    metrics.micro_precision =
        (tp_sum + fp_sum) > 0 ? static_cast<double>(tp_sum) / (tp_sum + fp_sum)
                              : 0.0;
    metrics.micro_recall =
        (tp_sum + fn_sum) > 0 ? static_cast<double>(tp_sum) / (tp_sum + fn_sum)
                              : 0.0;
    metrics.micro_f1 =
        (metrics.micro_precision + metrics.micro_recall) > 0.0
            ? 2.0 * metrics.micro_precision * metrics.micro_recall /
                  (metrics.micro_precision + metrics.micro_recall)
            : 0.0;
    return metrics;
}

}  // namespace tilelab
