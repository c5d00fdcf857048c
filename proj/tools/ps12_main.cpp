// ps12 command-line driver: rule derivation, refinement and export,
// derivative fields, verification suites, and polynomial sampling.
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "ps12/verify.hpp"

using namespace ps12;

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    return doc;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

nlohmann::json table_to_json(const RuleTable& t) {
    nlohmann::json doc = nlohmann::json::array();
    for (size_t o = 0; o < t.output_names.size(); ++o) {
        nlohmann::json rule;
        rule["output_functional"] = t.output_names[o];
        rule["terms"] = nlohmann::json::array();
        for (const auto& term : t.rules[o])
            rule["terms"].push_back({{"input_functional", t.input_names[size_t(term.input)]},
                                     {"numerator", term.num},
                                     {"denominator", term.den}});
        doc.push_back(std::move(rule));
    }
    return doc;
}

template <class S>
Poly2<S> poly_from_json(const nlohmann::json& doc) {
    Poly2<S> p;
    const auto& c = doc.at("coeffs");
    for (size_t i = 0; i < c.size() && i <= 5; ++i)
        for (size_t j = 0; j < c[i].size() && i + j <= 5; ++j)
            p.c[i][j] = ps12::detail::scalar_from_json<S>(c[i][j]);
    return p;
}

template <class S>
RefinementLevel<S> refine_mesh(const nlohmann::json& doc, int levels) {
    auto tri = load_triangulation<S>(doc);
    auto [tris, data] = to_macro_inputs(tri);
    return refine_to_level(tris, data, levels);
}

bool is_exact(const nlohmann::json& doc) {
    return doc.value("arithmetic", std::string("f64")) == "exact";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"C2-quintic Hermite subdivision on the Powell-Sabin 12-split"};
    app.require_subcommand(1);

    std::string element = "ps12", input, output, which = "mmm", suite, poly_path, mesh_path;
    int levels = 1;

    auto* derive = app.add_subcommand("derive-rules", "re-derive rule tables exactly");
    derive->add_option("--element", element, "ps12 (initialization) or ps6 (subdivision)")
        ->check(CLI::IsMember({"ps12", "ps6"}));
    derive->add_option("--out", output, "output rules JSON")->required();

    auto* refine = app.add_subcommand("refine", "refine a macro-triangulation and export a mesh");
    refine->add_option("--input", input, "triangulation JSON")->required();
    refine->add_option("--levels", levels, "refinement levels")->required();
    refine->add_option("--out", output, "output mesh (.obj or .ply)")->required();

    auto* field = app.add_subcommand("field", "export a derivative field as CSV");
    field->add_option("--input", input, "triangulation JSON")->required();
    field->add_option("--levels", levels, "refinement levels")->required();
    field->add_option("--which", which, "jet entry selector")
        ->check(CLI::IsMember({"f", "t", "m", "tt", "tm", "mm", "ttt", "ttm", "tmm", "mmm"}));
    field->add_option("--out", output, "output CSV")->required();

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"rules", "reproduction", "nullity", "smoothness", "examples"}));

    auto* sample = app.add_subcommand("sample", "fill nodal data from a polynomial");
    sample->add_option("--poly", poly_path, "polynomial JSON")->required();
    sample->add_option("--mesh", mesh_path, "triangulation JSON")->required();
    sample->add_option("--out", output, "output data JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive->parsed()) {
            Triangle<Rational> T(Point2<Rational>(0, 0), Point2<Rational>(1, 0),
                                 Point2<Rational>(0, 1));
            RuleTable t = element == "ps12" ? derive_init_rules(ps12_split(T))
                                            : derive_subdiv_rules(ps6_split(T));
            write_file(output, table_to_json(t).dump(2) + "\n");
        } else if (refine->parsed()) {
            nlohmann::json doc = read_json(input);
            std::string format = output.size() > 4 ? output.substr(output.size() - 3) : "";
            std::string bytes = is_exact(doc)
                                    ? export_mesh(refine_mesh<Rational>(doc, levels), format)
                                    : export_mesh(refine_mesh<double>(doc, levels), format);
            write_file(output, bytes);
        } else if (field->parsed()) {
            nlohmann::json doc = read_json(input);
            std::string csv =
                is_exact(doc) ? export_derivative_field(refine_mesh<Rational>(doc, levels), which)
                              : export_derivative_field(refine_mesh<double>(doc, levels), which);
            write_file(output, csv);
        } else if (ver->parsed()) {
            bool ok = verify::run(suite);
            std::printf("%s: %s\n", suite.c_str(), ok ? "pass" : "FAIL");
            return ok ? 0 : 1;
        } else if (sample->parsed()) {
            nlohmann::json mesh_doc = read_json(mesh_path);
            nlohmann::json poly_doc = read_json(poly_path);
            nlohmann::json out_doc;
            if (is_exact(mesh_doc))
                out_doc = save_triangulation(sample_polynomial(
                    poly_from_json<Rational>(poly_doc), load_triangulation<Rational>(mesh_doc)));
            else
                out_doc = save_triangulation(sample_polynomial(
                    poly_from_json<double>(poly_doc), load_triangulation<double>(mesh_doc)));
            write_file(output, out_doc.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
