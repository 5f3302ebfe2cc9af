#include "tcprio/checkpoint.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tcprio/errors.hpp"
#include "tcprio/text_format.hpp"

namespace tcprio {
namespace {

constexpr int kVersion = 1;
constexpr const char* kMagic = "tcprio-model";

void write_values(std::ostream& out, const char* tag, const std::vector<double>& v) {
  out << tag;
  for (double x : v) out << ' ' << format_double(x);
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!trim(line).empty()) return std::istringstream(line);
    }
    throw ParseError(line_no_, "unexpected end of checkpoint");
  }

  // Reads "<tag> <values...>" and checks the tag.
  std::istringstream expect(const std::string& tag) {
    auto ss = next();
    std::string got;
    ss >> got;
    if (got != tag) fail("expected '" + tag + "', found '" + got + "'");
    return ss;
  }

  template <typename T>
  T read(std::istringstream& ss, const char* what) {
    std::string tok;
    if (!(ss >> tok)) fail(std::string("missing ") + what);
    if constexpr (std::is_floating_point_v<T>) {
      auto v = parse_double(tok);
      if (!v) fail(std::string("bad number for ") + what);
      return *v;
    } else {
      auto v = parse_integer(tok);
      if (!v) fail(std::string("bad integer for ") + what);
      return static_cast<T>(*v);
    }
  }

  std::vector<double> values(std::istringstream& ss, std::size_t count, const char* what) {
    std::vector<double> v(count);
    for (auto& x : v) x = read<double>(ss, what);
    std::string extra;
    if (ss >> extra) fail(std::string("too many values for ") + what);
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_no_, msg); }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

NeuralModel load_neural(LineReader& r) {
  auto ls = r.expect("layers");
  const auto count = r.read<std::size_t>(ls, "layer count");
  std::vector<DenseLayer> layers(count);
  for (auto& l : layers) {
    auto hs = r.expect("layer");
    l.inputs = r.read<std::size_t>(hs, "layer inputs");
    l.outputs = r.read<std::size_t>(hs, "layer outputs");
    auto ws = r.expect("w");
    l.weights = r.values(ws, l.inputs * l.outputs, "weights");
    auto bs = r.expect("b");
    l.bias = r.values(bs, l.outputs, "bias");
  }
  try {
    return NeuralModel::from_layers(std::move(layers));
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
}

TreeModel load_tree(LineReader& r) {
  auto is = r.expect("input");
  const auto input_dim = r.read<std::size_t>(is, "input dimension");
  TreeParams p;
  {
    auto cs = r.expect("criterion");
    std::string name;
    cs >> name;
    try {
      p.criterion = parse_split_criterion(name);
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
  }
  {
    auto ds = r.expect("max_depth");
    std::string tok;
    ds >> tok;
    if (tok == "none") {
      p.max_depth.reset();
    } else {
      auto v = parse_integer(tok);
      if (!v || *v < 1) r.fail("bad max_depth");
      p.max_depth = static_cast<std::size_t>(*v);
    }
  }
  auto ms = r.expect("min_samples_split");
  p.min_samples_split = r.read<std::size_t>(ms, "min_samples_split");
  auto ns = r.expect("nodes");
  const auto count = r.read<std::size_t>(ns, "node count");
  std::vector<TreeNode> nodes(count);
  for (auto& n : nodes) {
    auto s = r.expect("node");
    n.feature = r.read<int>(s, "feature");
    n.threshold = r.read<double>(s, "threshold");
    n.left = r.read<int>(s, "left");
    n.right = r.read<int>(s, "right");
    n.value = r.read<double>(s, "value");
    n.samples = r.read<std::size_t>(s, "samples");
    n.depth = r.read<std::size_t>(s, "depth");
  }
  try {
    return TreeModel::from_nodes(input_dim, p, std::move(nodes));
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
}

}  // namespace

void save_checkpoint(std::ostream& out, const NeuralModel& model) {
  out << kMagic << ' ' << kVersion << "\nneural\n";
  out << "layers " << model.layers().size() << '\n';
  for (const auto& l : model.layers()) {
    out << "layer " << l.inputs << ' ' << l.outputs << '\n';
    write_values(out, "w", l.weights);
    write_values(out, "b", l.bias);
  }
}

void save_checkpoint(std::ostream& out, const TreeModel& model) {
  const auto& p = model.params();
  out << kMagic << ' ' << kVersion << "\ntree\n";
  out << "input " << model.input_dimension() << '\n';
  out << "criterion " << criterion_name(p.criterion) << '\n';
  out << "max_depth " << (p.max_depth ? std::to_string(*p.max_depth) : "none") << '\n';
  out << "min_samples_split " << p.min_samples_split << '\n';
  out << "nodes " << model.nodes().size() << '\n';
  for (const auto& n : model.nodes()) {
    out << "node " << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' '
        << n.right << ' ' << format_double(n.value) << ' ' << n.samples << ' ' << n.depth
        << '\n';
  }
}

ModelCheckpoint load_checkpoint(std::istream& in) {
  LineReader r(in);
  auto hs = r.expect(kMagic);
  const int version = r.read<int>(hs, "version");
  if (version != kVersion) r.fail("unsupported checkpoint version " + std::to_string(version));
  auto ks = r.next();
  std::string kind;
  ks >> kind;
  if (kind == "neural") return load_neural(r);
  if (kind == "tree") return load_tree(r);
  r.fail("unknown model kind '" + kind + "'");
}

}  // namespace tcprio
