#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "kh/csv.hpp"
#include "kh/experiments.hpp"
#include "kh/util.hpp"

namespace {

using namespace kh;

std::vector<Poly> parse_polys(PrimeField F, const std::vector<std::string>& texts) {
    std::vector<Poly> out;
    for (const std::string& t : texts) out.push_back(parse_poly(F, t));
    return out;
}

std::vector<Series> parse_series_list(PrimeField F, const std::vector<std::string>& texts) {
    std::vector<Series> out;
    for (const std::string& t : texts) out.push_back(parse_series(F, t));
    return out;
}

std::vector<Poly> parse_quotient_list(PrimeField F, const std::string& text) {
    std::vector<Poly> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) out.push_back(parse_poly(F, piece));
    if (out.empty()) throw config_error("empty quotient list");
    return out;
}

std::vector<std::uint64_t> parse_nlist(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (ec != std::errc() || ptr != piece.data() + piece.size() || v == 0)
            throw config_error("bad N '" + piece + "'");
        out.push_back(v);
    }
    if (out.empty()) throw config_error("empty N list");
    return out;
}

void print_lines(const std::vector<std::string>& lines) {
    for (const std::string& line : lines) std::cout << line << "\n";
}

int finish(bool pass) {
    std::cout << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

struct Options {
    std::uint32_t p = 2;
    std::vector<std::string> kron;
    std::vector<std::string> halton;
    std::uint64_t n = 16;
    int prec = 0;
    std::string out = "-";
    std::string in;
    std::string series = "gap2";
    std::string b_poly = "X";
    std::string quotients = "X";
    std::string nlist = "16,32,64,128,256,512,1024,2048,4096";
    std::string normalize;
    int terms = 10;
    int level = 2;
    int mmax = 12;
    int res = 3;
    int coeffs = 64;
    int dmax = 4;
    int lmax = 3;
    int texp = -1;
    std::uint64_t N = 1024;
    std::uint64_t kmax = 8;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1729;
    int threads = 1;
};

int cmd_gen(const Options& opt) {
    PrimeField F(opt.p);
    if (opt.n < 1) throw config_error("need --n >= 1");
    std::vector<Series> kron = parse_series_list(F, opt.kron);
    std::vector<Poly> halton = parse_polys(F, opt.halton);
    int prec = opt.prec > 0 ? opt.prec : default_precision(F, opt.n);
    HybridSpec spec(F, std::move(kron), std::move(halton), prec);

    PointDump dump;
    dump.p = opt.p;
    dump.spec_label = spec.label();
    dump.points = hybrid_block(spec, 0, opt.n);
    for (std::uint64_t i = 0; i < opt.n; ++i) dump.index.push_back(i);
    for (const auto& coord : dump.points[0].coords) dump.precisions.push_back(int(coord.size()));

    if (opt.out == "-") {
        write_point_csv(std::cout, dump);
    } else {
        std::ofstream f(opt.out);
        if (!f) throw config_error("cannot open '" + opt.out + "' for writing");
        write_point_csv(f, dump);
    }
    return 0;
}

int cmd_cf(const Options& opt) {
    PrimeField F(opt.p);
    if (opt.terms < 1) throw config_error("need --terms >= 1");
    Series L = parse_series(F, opt.series);
    ContinuedFraction cf = L.rational_form() ? cf_expand(L, opt.terms)
                                             : cf_expand_at_least(L, std::size_t(opt.terms));
    int kmax = 0;
    std::size_t shown = std::min(cf.certified_count(), std::size_t(opt.terms));
    for (std::size_t h = 1; h <= shown; ++h) kmax = std::max(kmax, cf.quotients()[h - 1].deg());
    std::cout << "series=" << L.label() << " certified=" << cf.certified_count()
              << " exact=" << (cf.exact() ? "true" : "false") << " K=" << kmax << "\n";
    std::cout << "h=0 A=" << poly_to_string(cf.a0()) << "\n";
    for (std::size_t h = 1; h <= shown; ++h) {
        auto [P, Q] = cf.convergent(h);
        std::cout << "h=" << h << " A=" << poly_to_string(cf.quotients()[h - 1])
                  << " d=" << cf.d(h) << " P=" << poly_to_string(P)
                  << " Q=" << poly_to_string(Q) << "\n";
    }
    return 0;
}

int cmd_verify(const Options& opt, const std::string& target) {
    PrimeField F(opt.p);
    if (target == "thm1") {
        std::vector<Series> kron = parse_series_list(F, opt.kron);
        std::vector<Poly> halton = parse_polys(F, opt.halton);
        int e = halton.empty() ? 1 : halton[0].deg();
        int prec = std::max(opt.dmax, e * opt.lmax) + 2;
        HybridSpec spec(F, std::move(kron), std::move(halton), prec);
        FairGridReport rep = thm1_grid(spec, opt.dmax, opt.lmax, opt.kmax);
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "thm2") {
        std::vector<Series> kron = parse_series_list(F, opt.kron);
        std::vector<Poly> halton = parse_polys(F, opt.halton);
        ScalingReport rep = thm2_scaling(F, kron, halton, parse_nlist(opt.nlist));
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "thm3") {
        Thm3Witness rep = thm3_witness(opt.level);
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "prop1") {
        Series L = parse_series(F, opt.series);
        Poly B = parse_poly(F, opt.b_poly);
        Prop1Report rep = prop1_check(L, B, opt.mmax);
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "prop2") {
        Series L = parse_series(F, opt.series);
        std::vector<Poly> bases = parse_polys(F, opt.halton);
        if (bases.empty()) bases.push_back(Poly::x(F));
        Prop2Report rep = prop2_bound(L, bases, opt.N);
        print_lines(rep.to_lines());
        bool pass = true;
        std::size_t dims = 1 + bases.size();
        if (dims <= 3 && opt.N <= 4096) {
            HybridSpec spec(F, {L}, bases, default_precision(F, opt.N));
            std::vector<DigitPoint> pts = hybrid_block(spec, 0, opt.N);
            Rat d = dims == 1 ? star_disc_1d(pts) : star_disc_exact(pts);
            double nd = double(opt.N) * d.to_double();
            bool consistent = nd <= kProp2ConsistencyC * double(rep.total);
            std::cout << "NDstar=" << nd << " c=" << kProp2ConsistencyC
                      << " consistent=" << (consistent ? "true" : "false") << "\n";
            pass = consistent;
        }
        return finish(pass);
    }
    if (target == "lemma3") {
        CylinderReport rep =
            lemma3_mc(F, parse_quotient_list(F, opt.quotients), opt.samples, opt.coeffs, opt.seed);
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "lemma4") {
        Poly B = parse_poly(F, opt.b_poly);
        ChiReport rep = lemma4_mc(B, opt.samples, opt.coeffs, opt.seed, opt.res);
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "example2") {
        Example2Report rep = example2_bundle();
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "nets") {
        NetsReport rep = nets_consistency(std::min(opt.mmax, 8));
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    if (target == "prop3") {
        std::vector<Poly> bases = parse_polys(F, opt.halton);
        if (bases.empty()) bases.push_back(Poly::x(F));
        GrowthReport rep = prop3_growth_mc(F, bases, int(std::min<std::uint64_t>(opt.samples, 1000)),
                                           8, opt.coeffs, opt.seed);
        print_lines(rep.to_lines());
        return finish(rep.pass());
    }
    throw config_error("unknown verify target '" + target + "'");
}

int cmd_disc(const Options& opt) {
    bool normalize = !opt.normalize.empty();
    if (normalize && opt.normalize != "sqrtlog")
        throw config_error("unknown normalization '" + opt.normalize + "'");

    if (!opt.in.empty()) {
        std::ifstream f(opt.in);
        if (!f) throw config_error("cannot open '" + opt.in + "'");
        PointDump dump = read_point_csv(f);
        std::size_t s = dump.points[0].coords.size();
        Rat d = s == 1 ? star_disc_1d(dump.points) : star_disc_exact(dump.points);
        std::uint64_t N = dump.points.size();
        std::cout << "N=" << N << " s=" << s << " Dstar=" << d.str()
                  << " Dstar_dec=" << d.to_double();
        if (normalize) {
            int t = opt.texp >= 0 ? opt.texp : int(s) - 1;
            double logN = std::max(1.0, std::log(double(N)));
            double ratio =
                double(N) * d.to_double() / (std::sqrt(double(N)) * std::pow(logN, t + 1));
            std::cout << " ratio=" << ratio;
        }
        std::cout << "\n";
        return 0;
    }

    PrimeField F(opt.p);
    std::vector<Series> kron = parse_series_list(F, opt.kron);
    std::vector<Poly> halton = parse_polys(F, opt.halton);
    ScalingReport rep = thm2_scaling(F, kron, halton, parse_nlist(opt.nlist));
    for (const ScalingRow& row : rep.rows) {
        Rat nd = Rat::of(detail::checked_mul(row.dstar.num, __int128(row.N)), row.dstar.den);
        std::cout << "N=" << row.N << " Dstar=" << row.dstar.str()
                  << " Dstar_dec=" << row.dstar.to_double() << " NDstar=" << nd.str();
        if (normalize) std::cout << " ratio=" << row.ratio;
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kronecker-Halton digital sequences over F_p((1/X)): generation, "
                 "continued fractions, distribution experiments"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--threads", opt.threads, "worker thread cap")->capture_default_str();

    CLI::App* gen = app.add_subcommand("gen", "generate hybrid sequence points as CSV");
    gen->add_option("--p", opt.p, "prime modulus")->capture_default_str();
    gen->add_option("--kronecker", opt.kron, "Kronecker series spec (repeatable)");
    gen->add_option("--halton", opt.halton, "Halton base polynomial (repeatable)");
    gen->add_option("--n", opt.n, "number of points")->capture_default_str();
    gen->add_option("--prec", opt.prec, "digits per coordinate (default: auto)");
    gen->add_option("--out", opt.out, "output path, - for stdout")->capture_default_str();

    CLI::App* cf = app.add_subcommand("cf", "continued fraction of a Laurent series");
    cf->add_option("--p", opt.p, "prime modulus")->capture_default_str();
    cf->add_option("--series", opt.series, "series spec")->required();
    cf->add_option("--terms", opt.terms, "quotients requested")->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "run a named experiment");
    std::string target;
    verify->add_option("target", target, "experiment name")
        ->required()
        ->check(CLI::IsMember({"thm1", "thm2", "thm3", "prop1", "prop2", "lemma3", "lemma4",
                               "example2", "nets", "prop3"}));
    verify->add_option("--p", opt.p, "prime modulus")->capture_default_str();
    verify->add_option("--level", opt.level, "witness level (thm3)")->capture_default_str();
    verify->add_option("--series", opt.series, "series spec")->capture_default_str();
    verify->add_option("--B", opt.b_poly, "polynomial factor")->capture_default_str();
    verify->add_option("--mmax", opt.mmax, "largest m checked")->capture_default_str();
    verify->add_option("--base", opt.halton, "Halton base polynomial (repeatable)");
    verify->add_option("--kronecker", opt.kron, "Kronecker series spec (repeatable)");
    verify->add_option("--N", opt.N, "point count (prop2)")->capture_default_str();
    verify->add_option("--nlist", opt.nlist, "comma-separated N values (thm2)")
        ->capture_default_str();
    verify->add_option("--quotients", opt.quotients, "comma-separated quotients (lemma3)")
        ->capture_default_str();
    verify->add_option("--samples", opt.samples, "Monte Carlo samples")->capture_default_str();
    verify->add_option("--M", opt.coeffs, "coefficient budget per sample")->capture_default_str();
    verify->add_option("--seed", opt.seed, "stream seed")->capture_default_str();
    verify->add_option("--res", opt.res, "digit resolution (lemma4)")->capture_default_str();
    verify->add_option("--dmax", opt.dmax, "largest Kronecker resolution (thm1)")
        ->capture_default_str();
    verify->add_option("--lmax", opt.lmax, "largest Halton resolution (thm1)")
        ->capture_default_str();
    verify->add_option("--kmax", opt.kmax, "blocks checked (thm1)")->capture_default_str();

    CLI::App* disc = app.add_subcommand("disc", "exact star discrepancy");
    disc->add_option("--in", opt.in, "CSV point dump to read");
    disc->add_option("--p", opt.p, "prime modulus")->capture_default_str();
    disc->add_option("--kronecker", opt.kron, "Kronecker series spec (repeatable)");
    disc->add_option("--halton", opt.halton, "Halton base polynomial (repeatable)");
    disc->add_option("--nlist", opt.nlist, "comma-separated N values")->capture_default_str();
    disc->add_option("--normalize", opt.normalize, "sqrtlog: print N D*/(sqrt(N) log^(t+1) N)");
    disc->add_option("--texp", opt.texp, "log exponent t for --normalize (default s-1)");

    for (CLI::App* sub : {gen, cf, verify, disc}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const kh::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const kh::precision_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const kh::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    kh::set_max_threads(opt.threads);
    try {
        if (gen->parsed()) return cmd_gen(opt);
        if (cf->parsed()) return cmd_cf(opt);
        if (verify->parsed()) return cmd_verify(opt, target);
        if (disc->parsed()) return cmd_disc(opt);
    } catch (const kh::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const kh::precision_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const kh::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
