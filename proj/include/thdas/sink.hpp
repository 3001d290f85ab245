#pragma once

#include <functional>
#include <vector>

#include "thdas/sample.hpp"

namespace thdas {

/// Receives calibrated samples in wire order. Throwing from `consume` ends
/// the acquisition session.
class SampleSink {
public:
    virtual ~SampleSink() = default;
    virtual void consume(const Sample& sample) = 0;
    /// Called once when the session ends cleanly.
    virtual void finish() {}
};

class CollectingSink : public SampleSink {
public:
    void consume(const Sample& sample) override { samples_.push_back(sample); }
    const std::vector<Sample>& samples() const { return samples_; }

private:
    std::vector<Sample> samples_;
};

class CallbackSink : public SampleSink {
public:
    explicit CallbackSink(std::function<void(const Sample&)> fn) : fn_(std::move(fn)) {}
    void consume(const Sample& sample) override { fn_(sample); }

private:
    std::function<void(const Sample&)> fn_;
};

}  // namespace thdas
