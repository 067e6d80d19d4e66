#pragma once

#include <filesystem>
#include <fstream>
#include <span>

#include "dme/nn/sgd.hpp"
#include "dme/planner/losses.hpp"

namespace dme::planner {

struct TrainExample {
    sim::Scene scene;
    decision::DriverLogicOutput logic;  // scripted Decision-Maker output
};

struct TrainConfig {
    int epochs = 40;
    double lr = 5e-3;
    double momentum = 0.9;
    std::uint64_t seed = 7;
    AblationMode ablation = AblationMode::dm_text;
    LossWeights weights;
    decision::RuleThresholds thresholds;
    PlannerDims dims;
};

struct EpochLog {
    double imitation = 0.0;
    double collision = 0.0;
    double consistency = 0.0;
    double total = 0.0;
};

struct TrainResult {
    PlannerParams params;
    std::vector<EpochLog> log;  // per-epoch means
};

// Loss went non-finite; the CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic single-threaded SGD over per-scene steps. Scene order is
// reshuffled each epoch from the config seed, so two runs with the same
// seed produce bit-identical parameters and logs.
inline TrainResult train(std::span<const TrainExample> dataset, const text::Vocabulary& vocab,
                         const TrainConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("train: dataset is empty");
    cfg.weights.validate();
    cfg.thresholds.validate();

    TrainResult result;
    result.params = PlannerParams::seeded(vocab, cfg.dims, cfg.seed);
    if (cfg.epochs == 0) return result;

    struct Prepared {
        nn::Matrix bev_tokens;
        SceneDistanceFields dist;
        TextCues cues;
    };
    std::vector<Prepared> prepared;
    prepared.reserve(dataset.size());
    for (const TrainExample& ex : dataset) {
        Prepared p;
        p.bev_tokens = text::bev_to_tokens(sim::rasterize_bev(ex.scene));
        p.dist = SceneDistanceFields::from_scene(ex.scene);
        p.cues = select_cues(cfg.ablation, ex.scene, ex.logic);
        prepared.push_back(std::move(p));
    }

    auto tensors = result.params.named_tensors();
    std::vector<nn::Matrix*> tensor_ptrs;
    for (auto& [name, m] : tensors) tensor_ptrs.push_back(m);
    nn::Sgd optimizer(cfg.lr, cfg.momentum);

    Rng shuffle_rng(Rng::mix(cfg.seed, 0x5affe11eULL));
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const bool use_consistency = consistency_active(cfg.ablation);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(
                                        shuffle_rng.uniform_int(0, static_cast<int>(i) - 1))]);

        EpochLog log;
        for (std::size_t idx : order) {
            const TrainExample& ex = dataset[idx];
            const Prepared& prep = prepared[idx];

            nn::Tape tape;
            PlannerVars vars = register_planner(tape, result.params);
            nn::Var pred = plan_traced(tape, prep.bev_tokens, prep.cues, vars, result.params);
            LossTerms terms;
            nn::Var loss = total_loss(tape, pred, ex.scene, prep.dist, ex.logic, cfg.weights,
                                      use_consistency, cfg.thresholds, &terms);
            if (!std::isfinite(terms.total))
                throw NumericError("train: loss became non-finite at epoch " +
                                   std::to_string(epoch) + ", scene '" + ex.scene.id +
                                   "' (lr " + std::to_string(cfg.lr) + " too high?)");
            tape.backward(loss);

            std::vector<const nn::Matrix*> grads;
            grads.reserve(tensor_ptrs.size());
            for (nn::Var v : vars.in_tensor_order()) grads.push_back(&tape.grad(v));
            optimizer.step(tensor_ptrs, grads);

            log.imitation += terms.imitation;
            log.collision += terms.collision;
            log.consistency += terms.consistency;
            log.total += terms.total;
        }
        const double n = static_cast<double>(dataset.size());
        log.imitation /= n;
        log.collision /= n;
        log.consistency /= n;
        log.total /= n;
        result.log.push_back(log);
    }
    return result;
}

// "epoch,imitation,collision,consistency,total", one row per epoch
inline void write_loss_csv(const std::filesystem::path& path, std::span<const EpochLog> log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_loss_csv: cannot write " + path.string());
    out << "epoch,imitation,collision,consistency,total\n";
    out.precision(10);
    for (std::size_t i = 0; i < log.size(); ++i)
        out << i << ',' << log[i].imitation << ',' << log[i].collision << ','
            << log[i].consistency << ',' << log[i].total << '\n';
}

} // namespace dme::planner
