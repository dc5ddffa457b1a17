#pragma once

// Words in marking generators: generator k >= 1 is the letter k, its inverse
// is -k.

#include <functional>
#include <string>
#include <vector>

#include "qf/hyp.hpp"

namespace qf {

using Word = std::vector<int>;

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word reduce(const Word& w);
Word cyclic_reduce(const Word& w);
/// Free-group conjugacy (after reduction); `allow_inverse` also accepts w2 ~ w1^-1.
bool conjugate(const Word& w1, const Word& w2, bool allow_inverse = false);
std::string to_string(const Word& w);

/// Evaluate a word through the images of its generators (index k-1 for letter k).
hyp::Isometry evaluate(const Word& w, const std::vector<hyp::Isometry>& images);

/// A one-relator presentation where one generator occurs exactly once in the
/// relator; eliminating it gives a free basis of the punctured-surface group.
class FreeElimination {
public:
    FreeElimination() = default;
    FreeElimination(int generator_count, const Word& relator);

    /// Rewrite w in the remaining free generators and reduce.
    Word to_free(const Word& w) const;
    bool equal(const Word& a, const Word& b) const;
    bool conjugate(const Word& a, const Word& b, bool allow_inverse = false) const;

    int eliminated() const { return eliminated_; }

private:
    int generator_count_ = 0;
    int eliminated_ = 0;
    Word replacement_;  // value of the eliminated generator
};

}  // namespace qf
