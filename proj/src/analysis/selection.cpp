#include "mdcrow/analysis/selection.hpp"

#include "mdcrow/chem/residues.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

namespace mdcrow::analysis {

Selection Selection::parse(const std::string& text) {
    Selection sel;
    sel.text_ = trim(text).empty() ? "all" : trim(text);
    const auto words = split_ws(sel.text_);
    size_t i = 0;
    auto usage = [&](const std::string& why) {
        return UsageError("bad selection '" + sel.text_ + "': " + why +
                          " (terms: all, protein, backbone, heavy, ca, water, solvent, chain X, "
                          "resid A-B, resname R, name N, element E, not T; join with 'and')");
    };
    while (i < words.size()) {
        Term t;
        std::string w = to_lower(words[i++]);
        if (w == "not") {
            t.negate = true;
            if (i >= words.size()) throw usage("dangling 'not'");
            w = to_lower(words[i++]);
        }
        if (w == "all" || w == "protein" || w == "backbone" || w == "heavy" || w == "ca" ||
            w == "water" || w == "solvent") {
            t.kind = w;
        } else if (w == "chain" || w == "resname" || w == "name" || w == "element") {
            if (i >= words.size()) throw usage("'" + w + "' needs an argument");
            t.kind = w;
            t.arg = words[i++];
        } else if (w == "resid") {
            if (i >= words.size()) throw usage("'resid' needs a range");
            t.kind = w;
            const auto range = words[i++];
            const auto dash = range.find('-', 1);
            try {
                t.lo = static_cast<int>(parse_int(range.substr(0, dash), "resid"));
                t.hi = dash == std::string::npos ? t.lo
                                                 : static_cast<int>(parse_int(range.substr(dash + 1), "resid"));
            } catch (const ParseError&) {
                throw usage("bad residue range '" + range + "'");
            }
        } else {
            throw usage("unknown term '" + w + "'");
        }
        sel.terms_.push_back(t);
        if (i < words.size()) {
            if (to_lower(words[i]) != "and") throw usage("expected 'and' before '" + words[i] + "'");
            ++i;
            if (i >= words.size()) throw usage("dangling 'and'");
        }
    }
    return sel;
}

bool Selection::matches(const Term& t, const chem::Atom& a) {
    using chem::ResidueKind;
    bool m = false;
    const auto kind = chem::classify_residue(a.res_name);
    if (t.kind == "all") {
        m = true;
    } else if (t.kind == "protein") {
        m = kind == ResidueKind::protein;
    } else if (t.kind == "backbone") {
        m = kind == ResidueKind::protein && (a.name == "N" || a.name == "CA" || a.name == "C" || a.name == "O");
    } else if (t.kind == "heavy") {
        m = a.element != "H";
    } else if (t.kind == "ca") {
        m = kind == ResidueKind::protein && a.name == "CA";
    } else if (t.kind == "water") {
        m = kind == ResidueKind::water;
    } else if (t.kind == "solvent") {
        m = kind == ResidueKind::water || kind == ResidueKind::solvent;
    } else if (t.kind == "chain") {
        m = std::string(1, a.chain) == t.arg;
    } else if (t.kind == "resid") {
        m = a.res_seq >= t.lo && a.res_seq <= t.hi;
    } else if (t.kind == "resname") {
        m = to_upper(a.res_name) == to_upper(t.arg);
    } else if (t.kind == "name") {
        m = to_upper(a.name) == to_upper(t.arg);
    } else if (t.kind == "element") {
        m = to_upper(a.element) == to_upper(t.arg);
    }
    return t.negate ? !m : m;
}

std::vector<std::size_t> Selection::apply(const chem::Structure& s) const {
    std::vector<std::size_t> idx;
    for (size_t i = 0; i < s.atoms.size(); ++i) {
        bool ok = true;
        for (const auto& t : terms_) ok = ok && matches(t, s.atoms[i]);
        if (ok) idx.push_back(i);
    }
    return idx;
}

std::vector<std::size_t> Selection::require(const chem::Structure& s) const {
    auto idx = apply(s);
    if (idx.empty()) throw UsageError("selection '" + text_ + "' matches no atoms");
    return idx;
}

} // namespace mdcrow::analysis
