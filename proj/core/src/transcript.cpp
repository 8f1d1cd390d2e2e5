#include "xcfb/transcript.hpp"

#include <ostream>

namespace xcfb {
namespace {

void write_expr(std::ostream& os, const LinExpr& e) {
    if (e.empty()) {
        os << "0";
        return;
    }
    bool first = true;
    for (const auto& [id, c] : e.terms()) {
        if (!first) os << " + ";
        os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)*a" << id;
        first = false;
    }
}

}  // namespace

long long Transcript::total_symbols() const {
    long long n = 0;
    for (const auto& d : desired) n += static_cast<long long>(d.size());
    return n;
}

Rational Transcript::ratio() const {
    return Rational(total_symbols(), total_slots());
}

void Transcript::write_text(std::ostream& os) const {
    os << "scheme " << scheme << "\n";
    os << "slots " << total_slots() << " symbols " << total_symbols()
       << " ratio " << ratio() << " predicted " << predicted_dof << "\n";
    os << "phases";
    for (int p : phase_lengths) os << " " << p;
    os << "\n";
    for (const auto& rec : slots) {
        os << "slot " << rec.slot << "\n";
        for (std::size_t t = 0; t < rec.transmitted.size(); ++t) {
            for (std::size_t a = 0; a < rec.transmitted[t].size(); ++a) {
                os << "  tx " << t << " ant " << a << ": ";
                write_expr(os, rec.transmitted[t][a]);
                os << "\n";
            }
        }
        for (std::size_t r = 0; r < rec.draw.h.size(); ++r) {
            for (std::size_t t = 0; t < rec.draw.h[r].size(); ++t) {
                const CMatrix& h = rec.draw.h[r][t];
                os << "  H[" << r << "][" << t << "] =";
                for (const auto& e : h.data)
                    os << " " << e.real() << (e.imag() < 0 ? "" : "+") << e.imag() << "i";
                os << "\n";
            }
        }
        for (std::size_t r = 0; r < rec.received.size(); ++r) {
            for (std::size_t a = 0; a < rec.received[r].size(); ++a) {
                os << "  rx " << r << " ant " << a << ": ";
                write_expr(os, rec.received[r][a]);
                os << "\n";
            }
        }
    }
}

}  // namespace xcfb
