#include "qf/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "qf/error.hpp"

namespace qf {

Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (int& x : out) x = -x;
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (int x : w) {
        if (!out.empty() && out.back() == -x) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return out;
}

Word cyclic_reduce(const Word& w) {
    Word r = reduce(w);
    std::size_t lo = 0;
    std::size_t hi = r.size();
    while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
        ++lo;
        --hi;
    }
    return Word(r.begin() + static_cast<long>(lo), r.begin() + static_cast<long>(hi));
}

bool conjugate(const Word& w1, const Word& w2, bool allow_inverse) {
    Word a = cyclic_reduce(w1);
    Word b = cyclic_reduce(w2);
    auto rotation_of = [](const Word& x, const Word& y) {
        if (x.size() != y.size()) return false;
        if (x.empty()) return true;
        Word doubled = concat(x, x);
        return std::search(doubled.begin(), doubled.end(), y.begin(), y.end()) != doubled.end();
    };
    if (rotation_of(a, b)) return true;
    return allow_inverse && rotation_of(a, inverse(b));
}

std::string to_string(const Word& w) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ']';
    return os.str();
}

hyp::Isometry evaluate(const Word& w, const std::vector<hyp::Isometry>& images) {
    hyp::Isometry out;
    for (int x : w) {
        auto k = static_cast<std::size_t>(std::abs(x) - 1);
        if (x == 0 || k >= images.size()) throw Error("word letter out of range: " + std::to_string(x));
        out = out * (x > 0 ? images[k] : images[k].inverse());
    }
    return out;
}

FreeElimination::FreeElimination(int generator_count, const Word& relator)
    : generator_count_(generator_count) {
    for (int g = generator_count; g >= 1; --g) {
        auto count = std::count_if(relator.begin(), relator.end(), [g](int x) { return std::abs(x) == g; });
        if (count != 1) continue;
        auto pos = static_cast<std::size_t>(
            std::find_if(relator.begin(), relator.end(), [g](int x) { return std::abs(x) == g; }) - relator.begin());
        // relator = L g^e R = 1  =>  g^e = L^-1 R^-1
        Word left(relator.begin(), relator.begin() + static_cast<long>(pos));
        Word right(relator.begin() + static_cast<long>(pos) + 1, relator.end());
        Word value = concat(inverse(left), inverse(right));
        if (relator[pos] < 0) value = inverse(value);
        eliminated_ = g;
        replacement_ = reduce(value);
        return;
    }
    throw Error("relator has no generator occurring exactly once");
}

Word FreeElimination::to_free(const Word& w) const {
    Word out;
    for (int x : w) {
        if (std::abs(x) > generator_count_ || x == 0) throw Error("letter out of range: " + std::to_string(x));
        if (std::abs(x) == eliminated_) {
            const Word& sub = x > 0 ? replacement_ : inverse(replacement_);
            out.insert(out.end(), sub.begin(), sub.end());
        } else {
            out.push_back(x);
        }
    }
    return reduce(out);
}

bool FreeElimination::equal(const Word& a, const Word& b) const { return to_free(a) == to_free(b); }

bool FreeElimination::conjugate(const Word& a, const Word& b, bool allow_inverse) const {
    return qf::conjugate(to_free(a), to_free(b), allow_inverse);
}

}  // namespace qf
