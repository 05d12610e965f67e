#include "lagtori/pfld.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lagtori {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void header(std::ostream& os, const Grid& g, const char* kind) {
    os << "PFLD1 " << g.n1 << ' ' << g.n2 << ' ' << num(g.L1) << ' ' << num(g.L2) << ' ' << kind << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

}  // namespace

void write_pfld(std::ostream& os, const RealField& f) {
    header(os, f.grid, "real");
    for (int j = 0; j < f.n2(); ++j)
        for (int i = 0; i < f.n1(); ++i) os << num(f.values(i, j)) << '\n';
}

void write_pfld(std::ostream& os, const ComplexField& f) {
    header(os, f.grid, "complex");
    for (int j = 0; j < f.n2(); ++j)
        for (int i = 0; i < f.n1(); ++i)
            os << num(f.values(i, j).real()) << ' ' << num(f.values(i, j).imag()) << '\n';
}

void write_pfld(const std::string& path, const RealField& f) {
    auto os = open_out(path);
    write_pfld(os, f);
}

void write_pfld(const std::string& path, const ComplexField& f) {
    auto os = open_out(path);
    write_pfld(os, f);
}

AnyField read_pfld(std::istream& is) {
    std::string line, magic, kind;
    if (!std::getline(is, line)) throw std::runtime_error("PFLD1: empty input");
    std::istringstream hs(line);
    int n1 = 0, n2 = 0;
    double L1 = 0, L2 = 0;
    if (!(hs >> magic >> n1 >> n2 >> L1 >> L2 >> kind) || magic != "PFLD1")
        throw std::runtime_error("PFLD1: malformed header '" + line + "'");
    if (kind != "real" && kind != "complex") throw std::runtime_error("PFLD1: unknown sample kind " + kind);
    Grid g(n1, n2, L1, L2);
    if (kind == "real") {
        RealField f(g);
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i)
                if (!(is >> f.values(i, j))) throw std::runtime_error("PFLD1: truncated sample data");
        return f;
    }
    ComplexField f(g);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            double re, im;
            if (!(is >> re >> im)) throw std::runtime_error("PFLD1: truncated sample data");
            f.values(i, j) = {re, im};
        }
    return f;
}

AnyField read_pfld(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_pfld(is);
}

RealField read_pfld_real(const std::string& path) {
    auto any = read_pfld(path);
    if (auto* f = std::get_if<RealField>(&any)) return *f;
    throw std::runtime_error(path + ": expected a real field");
}

}  // namespace lagtori
