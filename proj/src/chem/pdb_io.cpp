#include "mdcrow/chem/pdb_io.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mdcrow::chem {

namespace {

std::string column(const std::string& line, size_t start, size_t len) {
    if (start >= line.size()) return {};
    return line.substr(start, std::min(len, line.size() - start));
}

double coord(const std::string& line, size_t start, int lineno) {
    const auto field = trim(column(line, start, 8));
    try {
        return parse_double(field, "coordinate");
    } catch (const ParseError&) {
        throw ParseError("bad coordinate on PDB line " + std::to_string(lineno) + ": '" + field + "'");
    }
}

} // namespace

Structure parse_pdb(std::string_view text) {
    Structure s;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool in_model = false;
    bool model_done = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto rec = column(line, 0, 6);
        if (rec.rfind("MODEL", 0) == 0) {
            if (in_model || model_done) break;
            in_model = true;
            continue;
        }
        if (rec.rfind("ENDMDL", 0) == 0) {
            model_done = true;
            in_model = false;
            break;
        }
        if (rec.rfind("CRYST1", 0) == 0) {
            try {
                Eigen::Vector3d box(parse_double(column(line, 6, 9), "a"),
                                    parse_double(column(line, 15, 9), "b"),
                                    parse_double(column(line, 24, 9), "c"));
                // 1 Å cells are placeholders written by some programs.
                if (box.minCoeff() > 1.0) s.box = box;
            } catch (const ParseError&) {
            }
            continue;
        }
        const bool is_atom = rec == "ATOM  " || rec == "ATOM";
        const bool is_het = rec == "HETATM";
        if (!is_atom && !is_het) continue;
        if (line.size() < 54)
            throw ParseError("truncated coordinate record on PDB line " + std::to_string(lineno));
        Atom a;
        const auto serial = trim(column(line, 6, 5));
        a.serial = serial.empty() ? static_cast<int>(s.atoms.size()) + 1
                                  : static_cast<int>(parse_int(serial, "serial"));
        a.name = trim(column(line, 12, 4));
        a.res_name = trim(column(line, 17, 4));
        a.chain = line.size() > 21 && line[21] != ' ' ? line[21] : 'A';
        a.res_seq = static_cast<int>(parse_int(column(line, 22, 4), "residue number"));
        a.icode = line.size() > 26 ? line[26] : ' ';
        a.pos = {coord(line, 30, lineno), coord(line, 38, lineno), coord(line, 46, lineno)};
        const auto occ = trim(column(line, 54, 6));
        const auto bf = trim(column(line, 60, 6));
        a.occupancy = occ.empty() ? 1.0 : parse_double(occ, "occupancy");
        a.b_factor = bf.empty() ? 0.0 : parse_double(bf, "b-factor");
        auto el = trim(column(line, 76, 2));
        a.element = el.empty() || !find_element(el) ? element_from_atom_name(a.name, a.res_name)
                                                    : std::string(find_element(el)->symbol);
        a.hetero = is_het;
        if (!a.pos.allFinite())
            throw ParseError("non-finite coordinate on PDB line " + std::to_string(lineno));
        s.atoms.push_back(std::move(a));
    }
    renumber(s);
    return s;
}

Structure read_pdb(const std::string& path) { return parse_pdb(read_file(path)); }

std::string write_pdb(const Structure& s) {
    std::string out;
    char buf[128];
    if (!s.provenance.empty()) {
        for (const auto& line : split(s.provenance, '\n')) {
            std::snprintf(buf, sizeof(buf), "REMARK 250 %-69.69s\n", line.c_str());
            out += buf;
        }
    }
    if (s.box) {
        std::snprintf(buf, sizeof(buf), "CRYST1%9.3f%9.3f%9.3f%7.2f%7.2f%7.2f P 1           1\n",
                      s.box->x(), s.box->y(), s.box->z(), 90.0, 90.0, 90.0);
        out += buf;
    }
    int serial = 1;
    char prev_chain = 0;
    for (size_t i = 0; i < s.atoms.size(); ++i) {
        const auto& a = s.atoms[i];
        if (prev_chain && a.chain != prev_chain) {
            std::snprintf(buf, sizeof(buf), "TER   %5d\n", serial++ % 100000);
            out += buf;
        }
        prev_chain = a.chain;
        // Four-character names start in column 13, shorter ones in column 14.
        std::string name = a.name.size() >= 4 ? a.name.substr(0, 4) : " " + a.name;
        std::snprintf(buf, sizeof(buf), "%-6s%5d %-4s %3.3s %c%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2s\n",
                      a.hetero ? "HETATM" : "ATOM", serial++ % 100000, name.c_str(),
                      a.res_name.c_str(), a.chain, a.res_seq % 10000, a.icode, a.pos.x(), a.pos.y(),
                      a.pos.z(), a.occupancy, a.b_factor, to_upper(a.element).c_str());
        out += buf;
    }
    out += "END\n";
    return out;
}

void save_pdb(const Structure& s, const std::string& path) { write_file(path, write_pdb(s)); }

} // namespace mdcrow::chem
