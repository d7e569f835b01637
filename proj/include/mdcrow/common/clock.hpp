#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <string>

namespace mdcrow {

// Wall clock and identifier sources are injected so scripted runs can be
// replayed byte-for-byte.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now_seconds() = 0;
    virtual std::string iso_timestamp() = 0;
};

class SystemClock final : public Clock {
public:
    double now_seconds() override;
    std::string iso_timestamp() override;
};

// Advances by a fixed tick on every query.
class FakeClock final : public Clock {
public:
    explicit FakeClock(double start = 0.0, double tick = 0.5) : t_(start), tick_(tick) {}
    double now_seconds() override;
    std::string iso_timestamp() override;

private:
    double t_;
    double tick_;
};

class IdSource {
public:
    virtual ~IdSource() = default;
    // 16 characters from the URL-safe base64 alphabet.
    virtual std::string next_run_id() = 0;
};

class RandomIdSource final : public IdSource {
public:
    RandomIdSource();
    std::string next_run_id() override;

private:
    std::random_device device_;
};

class SeededIdSource final : public IdSource {
public:
    explicit SeededIdSource(std::uint64_t seed) : rng_(seed) {}
    std::string next_run_id() override;

private:
    std::mt19937_64 rng_;
};

std::shared_ptr<Clock> default_clock();

} // namespace mdcrow
