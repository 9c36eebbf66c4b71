#include "nbldpc/galois.hpp"

#include <stdexcept>
#include <string>

namespace nbldpc {

unsigned GaloisField::default_poly(int m) {
    // One conventional primitive polynomial per degree.
    static const unsigned table[9] = {0,    0x3,  0x7,  0xB, 0x13,
                                      0x25, 0x43, 0x89, 0x11D};
    if (m < 1 || m > 8) throw std::invalid_argument("field degree must be in [1,8]");
    return table[m];
}

GaloisField::GaloisField(int m) : GaloisField(m, default_poly(m)) {}

GaloisField::GaloisField(int m, unsigned poly) : m_(m), poly_(poly) {
    if (m < 1 || m > 8) throw std::invalid_argument("field degree must be in [1,8]");
    q_ = 1 << m;
    if ((poly_ >> m) != 1u)
        throw std::invalid_argument("modulus 0x" + std::to_string(poly_) +
                                    " does not have degree " + std::to_string(m));
    build_tables();
}

void GaloisField::build_tables() {
    std::array<bool, 256> seen{};
    unsigned b = 1;
    for (int i = 0; i < q_ - 1; ++i) {
        if (b == 0 || b >= unsigned(q_) || seen[b])
            throw std::invalid_argument("modulus is not primitive: powers of x do not "
                                        "enumerate the nonzero field elements");
        seen[b] = true;
        antilog_[i] = Symbol(b);
        log_[b] = std::uint8_t(i);
        b <<= 1;
        if (b & unsigned(q_)) b ^= poly_;
    }
    if (b != 1)
        throw std::invalid_argument("modulus is not primitive: x^(q-1) != 1");
}

Symbol GaloisField::inv(Symbol a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    int e = (q_ - 1 - log_[a]) % (q_ - 1);
    return antilog_[e];
}

int GaloisField::log(Symbol a) const {
    if (a == 0) throw std::domain_error("log of zero");
    return log_[a];
}

}  // namespace nbldpc
