#pragma once

#include <span>
#include <vector>

#include "dme/nn/matrix.hpp"

namespace dme::nn {

// param <- param - lr * grad, elementwise.
inline void sgd_step(Matrix& param, const Matrix& grad, double lr) {
    if (!param.same_shape(grad))
        throw std::invalid_argument("sgd_step: shape mismatch: " + param.shape_str() + " vs " +
                                    grad.shape_str());
    if (!(lr > 0.0)) throw std::invalid_argument("sgd_step: lr must be > 0");
    for (std::size_t i = 0; i < param.size(); ++i) param.data()[i] -= lr * grad.data()[i];
}

// SGD with optional momentum; the only optimizer in this repo.
class Sgd {
public:
    explicit Sgd(double lr, double momentum = 0.0) : lr_(lr), momentum_(momentum) {
        if (!(lr > 0.0)) throw std::invalid_argument("Sgd: lr must be > 0");
    }

    void step(std::span<Matrix* const> params, std::span<const Matrix* const> grads) {
        if (params.size() != grads.size())
            throw std::invalid_argument("Sgd::step: parameter/gradient count mismatch");
        if (momentum_ == 0.0) {
            for (std::size_t i = 0; i < params.size(); ++i)
                sgd_step(*params[i], *grads[i], lr_);
            return;
        }
        if (velocity_.empty())
            for (std::size_t i = 0; i < params.size(); ++i)
                velocity_.emplace_back(params[i]->rows(), params[i]->cols());
        for (std::size_t i = 0; i < params.size(); ++i) {
            Matrix& v = velocity_[i];
            if (!v.same_shape(*grads[i]))
                throw std::invalid_argument("Sgd::step: shape changed between steps");
            for (std::size_t j = 0; j < v.size(); ++j) {
                v.data()[j] = momentum_ * v.data()[j] + grads[i]->data()[j];
                params[i]->data()[j] -= lr_ * v.data()[j];
            }
        }
    }

    double lr() const { return lr_; }
    void set_lr(double lr) { lr_ = lr; }

private:
    double lr_;
    double momentum_;
    std::vector<Matrix> velocity_;
};

} // namespace dme::nn
