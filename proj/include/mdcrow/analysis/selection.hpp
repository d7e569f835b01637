#pragma once

#include "mdcrow/chem/structure.hpp"

#include <string>
#include <vector>

namespace mdcrow::analysis {

/// Atom predicate. Grammar: terms joined by "and"; a term is one of
///   all | protein | backbone | heavy | ca | water | solvent
///   chain <id> | resid <a>[-<b>] | resname <name> | name <atom> | element <sym>
///   not <term>
class Selection {
public:
    static Selection parse(const std::string& text);
    static Selection all() { return parse("all"); }

    std::vector<std::size_t> apply(const chem::Structure& s) const;
    // Throws UsageError when nothing matches.
    std::vector<std::size_t> require(const chem::Structure& s) const;

    const std::string& text() const { return text_; }

private:
    struct Term {
        std::string kind;
        std::string arg;
        int lo = 0;
        int hi = 0;
        bool negate = false;
    };
    static bool matches(const Term& t, const chem::Atom& a);

    std::string text_;
    std::vector<Term> terms_;
};

} // namespace mdcrow::analysis
