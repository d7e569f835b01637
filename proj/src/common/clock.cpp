#include "mdcrow/common/clock.hpp"

#include <ctime>
#include <cstdio>

namespace mdcrow {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

std::string format_iso(double seconds) {
    const auto whole = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&whole, &tm);
    char buf[64];
    const int millis = static_cast<int>((seconds - static_cast<double>(whole)) * 1000.0);
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, millis);
    return buf;
}

template <typename Gen>
std::string draw_id(Gen& gen) {
    std::uniform_int_distribution<int> pick(0, 63);
    std::string id(16, ' ');
    for (auto& c : id) c = kAlphabet[pick(gen)];
    return id;
}

} // namespace

double SystemClock::now_seconds() {
    using namespace std::chrono;
    return duration<double>(system_clock::now().time_since_epoch()).count();
}

std::string SystemClock::iso_timestamp() { return format_iso(now_seconds()); }

double FakeClock::now_seconds() {
    const double t = t_;
    t_ += tick_;
    return t;
}

std::string FakeClock::iso_timestamp() { return format_iso(1.7e9 + now_seconds()); }

RandomIdSource::RandomIdSource() = default;

std::string RandomIdSource::next_run_id() { return draw_id(device_); }

std::string SeededIdSource::next_run_id() { return draw_id(rng_); }

std::shared_ptr<Clock> default_clock() {
    static auto clock = std::make_shared<SystemClock>();
    return clock;
}

} // namespace mdcrow
