#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/ganae/GanAe.hpp>
#include <faultgan/io/Format.hpp>

namespace faultgan::ganae {

// Model file schema (version 1): line-oriented `key value...` document.
//   faultgan-model v1
//   kind ganae
//   <scalar config keys>
//   vec channel_min <n> <values...>
//   network encoder|generator|discriminator
//   layers <count>
//   layer <i> <out> <in> <activation>
//   b <i> <values...>
//   w <i> <row> <values...>
//   prior <complement_count> <center>
//   vec prior_mean ... / basisrow <j> <values...>
// Floats are written as shortest round-trip decimals, so save/load is
// value-exact.

namespace detail {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            tokens.clear();
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("model file: line " + std::to_string(lineno_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::size_t lineno_ = 0;
};

inline void write_vec(std::ostream& out, const char* name, const numerics::Vec& v) {
    out << "vec " << name << ' ' << v.size();
    for (double x : v) out << ' ' << io::format_double(x);
    out << '\n';
}

inline void write_network(std::ostream& out, const char* name, const neural::MlpParams& p) {
    out << "network " << name << '\n';
    out << "layers " << p.layers.size() << '\n';
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        const auto& l = p.layers[i];
        out << "layer " << i << ' ' << l.out_size() << ' ' << l.in_size() << ' '
            << neural::activation_name(l.act) << '\n';
        out << "b " << i;
        for (double x : l.bias) out << ' ' << io::format_double(x);
        out << '\n';
        for (std::size_t r = 0; r < l.out_size(); ++r) {
            out << "w " << i << ' ' << r;
            for (std::size_t c = 0; c < l.in_size(); ++c)
                out << ' ' << io::format_double(l.weight(r, c));
            out << '\n';
        }
    }
}

inline neural::MlpParams read_network(LineReader& reader) {
    std::vector<std::string> t;
    if (!reader.next(t) || t[0] != "layers" || t.size() != 2) reader.fail("expected 'layers <n>'");
    const std::size_t n_layers = std::stoul(t[1]);
    neural::MlpParams p;
    for (std::size_t i = 0; i < n_layers; ++i) {
        if (!reader.next(t) || t[0] != "layer" || t.size() != 5) reader.fail("expected layer header");
        neural::Layer l;
        const std::size_t rows = std::stoul(t[2]);
        const std::size_t cols = std::stoul(t[3]);
        l.weight = numerics::Matrix(rows, cols);
        l.act = neural::parse_activation(t[4]);
        if (!reader.next(t) || t[0] != "b" || t.size() != rows + 2) reader.fail("expected bias row");
        l.bias.resize(rows);
        for (std::size_t j = 0; j < rows; ++j) l.bias[j] = io::parse_double(t[j + 2]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!reader.next(t) || t[0] != "w" || t.size() != cols + 3)
                reader.fail("expected weight row");
            for (std::size_t c = 0; c < cols; ++c) l.weight(r, c) = io::parse_double(t[c + 3]);
        }
        p.layers.push_back(std::move(l));
    }
    p.validate();
    return p;
}

inline numerics::Vec read_vec(LineReader& reader, const std::string& name,
                              std::vector<std::string>& t) {
    if (t.size() < 3 || t[0] != "vec" || t[1] != name) reader.fail("expected vec " + name);
    const std::size_t n = std::stoul(t[2]);
    if (t.size() != n + 3) reader.fail("vec " + name + ": length mismatch");
    numerics::Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = io::parse_double(t[i + 3]);
    return v;
}

}  // namespace detail

inline void save_model(const GanAeModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_model: cannot write '" + path + "'");
    out << "faultgan-model v1\n";
    out << "kind ganae\n";
    out << "input_dim " << m.input_dim() << '\n';
    out << "encoding_dim " << m.encoding_dim() << '\n';
    out << "prior_kind " << prior_name(m.config.prior) << '\n';
    out << "epochs " << m.config.epochs << '\n';
    out << "batch " << m.config.batch << '\n';
    out << "lr " << io::format_double(m.config.lr) << '\n';
    out << "seed " << m.config.seed << '\n';
    out << "train_fraction " << io::format_double(m.config.train_fraction) << '\n';
    out << "detect_threshold " << io::format_double(m.config.detect_threshold) << '\n';
    out << "window_len " << m.config.window_len << '\n';
    out << "stride " << m.config.stride << '\n';
    out << "warmstart_epochs " << m.config.warmstart_epochs << '\n';
    detail::write_vec(out, "channel_min", m.channel_min);
    detail::write_vec(out, "channel_max", m.channel_max);
    detail::write_network(out, "encoder", m.encoder);
    detail::write_network(out, "generator", m.generator);
    detail::write_network(out, "discriminator", m.discriminator);
    if (m.config.prior == PriorKind::Orthogonal) {
        out << "prior " << m.prior_basis.complement_count << ' '
            << (m.prior_basis.center ? 1 : 0) << '\n';
        detail::write_vec(out, "prior_mean", m.prior_basis.mean);
        out << "basis " << m.prior_basis.basis.rows() << ' ' << m.prior_basis.basis.cols() << '\n';
        for (std::size_t r = 0; r < m.prior_basis.basis.rows(); ++r) {
            out << "basisrow " << r;
            for (std::size_t c = 0; c < m.prior_basis.basis.cols(); ++c)
                out << ' ' << io::format_double(m.prior_basis.basis(r, c));
            out << '\n';
        }
    }
    out << "end\n";
}

inline GanAeModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
    detail::LineReader reader(in);
    std::vector<std::string> t;

    if (!reader.next(t) || t.size() != 2 || t[0] != "faultgan-model")
        reader.fail("not a faultgan model file");
    if (t[1] != "v1") reader.fail("schema version '" + t[1] + "' not supported (want v1)");
    if (!reader.next(t) || t[0] != "kind" || t.size() != 2) reader.fail("expected kind");
    if (t[1] != "ganae") reader.fail("model kind '" + t[1] + "' is not a ganae model");

    GanAeModel m;
    const auto scalar = [&](const char* key) {
        if (!reader.next(t) || t.size() != 2 || t[0] != key)
            reader.fail(std::string("expected '") + key + " <value>'");
        return t[1];
    };
    scalar("input_dim");
    scalar("encoding_dim");
    m.config.prior = parse_prior(scalar("prior_kind"));
    m.config.epochs = std::stoul(scalar("epochs"));
    m.config.batch = std::stoul(scalar("batch"));
    m.config.lr = io::parse_double(scalar("lr"));
    m.config.seed = std::stoull(scalar("seed"));
    m.config.train_fraction = io::parse_double(scalar("train_fraction"));
    m.config.detect_threshold = io::parse_double(scalar("detect_threshold"));
    m.config.window_len = std::stoul(scalar("window_len"));
    m.config.stride = std::stoul(scalar("stride"));
    m.config.warmstart_epochs = std::stoul(scalar("warmstart_epochs"));

    if (!reader.next(t)) reader.fail("unexpected end of file");
    m.channel_min = detail::read_vec(reader, "channel_min", t);
    if (!reader.next(t)) reader.fail("unexpected end of file");
    m.channel_max = detail::read_vec(reader, "channel_max", t);

    for (const char* name : {"encoder", "generator", "discriminator"}) {
        if (!reader.next(t) || t.size() != 2 || t[0] != "network" || t[1] != name)
            reader.fail(std::string("expected network ") + name);
        auto net = detail::read_network(reader);
        if (std::string(name) == "encoder") m.encoder = std::move(net);
        else if (std::string(name) == "generator") m.generator = std::move(net);
        else m.discriminator = std::move(net);
    }

    if (!reader.next(t)) reader.fail("unexpected end of file");
    if (t[0] == "prior") {
        if (t.size() != 3) reader.fail("expected 'prior <complement> <center>'");
        m.prior_basis.complement_count = std::stoul(t[1]);
        m.prior_basis.center = t[2] == "1";
        if (!reader.next(t)) reader.fail("unexpected end of file");
        m.prior_basis.mean = detail::read_vec(reader, "prior_mean", t);
        if (!reader.next(t) || t[0] != "basis" || t.size() != 3) reader.fail("expected basis");
        const std::size_t rows = std::stoul(t[1]);
        const std::size_t cols = std::stoul(t[2]);
        m.prior_basis.basis = numerics::Matrix(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!reader.next(t) || t[0] != "basisrow" || t.size() != cols + 2)
                reader.fail("expected basisrow");
            for (std::size_t c = 0; c < cols; ++c)
                m.prior_basis.basis(r, c) = io::parse_double(t[c + 2]);
        }
        if (!reader.next(t)) reader.fail("unexpected end of file");
    }
    if (t[0] != "end") reader.fail("expected end marker");
    m.config.encoding_dim = m.encoding_dim();
    m.validate();
    return m;
}

}  // namespace faultgan::ganae
