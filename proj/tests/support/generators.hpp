#pragma once
// Seeded helpers for property-style tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "codeneed/corpus.hpp"

namespace testgen {

class Rand {
public:
    explicit Rand(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    std::size_t index(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(gen_() % n); }

    int range(int lo, int hi) { // inclusive
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return uniform() < p; }

    std::string word(int min_len = 2, int max_len = 9) {
        static const char letters[] = "abcdefghijklmnopqrstuvwxyz";
        int len = range(min_len, max_len);
        std::string w;
        for (int i = 0; i < len; ++i) w += letters[index(26)];
        return w;
    }

private:
    std::mt19937_64 gen_;
};

inline codeneed::corpus::QuestionRecord make_question(std::int64_t id, std::int64_t created,
                                                      std::string title, std::string body_html) {
    codeneed::corpus::QuestionRecord q;
    q.id = id;
    q.creation_utc = created;
    q.title = std::move(title);
    q.body_html = std::move(body_html);
    q.reputation_at_post = 100;
    return q;
}

} // namespace testgen
