#pragma once
// Stable 64-bit content hashing (FNV-1a) for data-file and schema fingerprints.
// Not cryptographic; used only to detect drift between vocabularies and the
// preprocessing data files that produced them.

#include <cstdint>
#include <string>
#include <string_view>

namespace codeneed {

class Fnv1a {
public:
    void update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= static_cast<std::uint64_t>(c);
            state_ *= 0x100000001b3ULL;
        }
    }

    // Field separator so that ("ab","c") and ("a","bc") hash differently.
    void update_field(std::string_view bytes) {
        update(bytes);
        const char sep = '\x1f';
        update(std::string_view(&sep, 1));
    }

    std::uint64_t value() const { return state_; }

    std::string hex() const {
        static const char digits[] = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xf];
            v >>= 4;
        }
        return out;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string hash_hex(std::string_view bytes) {
    Fnv1a h;
    h.update(bytes);
    return h.hex();
}

} // namespace codeneed
