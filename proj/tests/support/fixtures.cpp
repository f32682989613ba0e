#include "fixtures.hpp"

#include "agdbg/grammar_parser.hpp"
#include "agdbg/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace agdbg::testing {

std::string grammar_path(const std::string& file) { return std::string(AGDBG_GRAMMAR_DIR) + "/" + file; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const Grammar> load_grammar(const std::string& file) {
  return std::make_shared<const Grammar>(parse_grammar(read_text(grammar_path(file))));
}

AttributedTree eval_file(const std::string& file, const std::string& input) {
  return attribute_input(load_grammar(file), input);
}

InstanceId inst(const AttributedTree& at, const std::string& name) {
  return parse_instance_address(at, name);
}

Rational rat(const AttributedTree& at, const std::string& name) {
  const Slot& s = at.value(inst(at, name));
  if (!has_value(s)) throw std::runtime_error(name + " has no value");
  return std::get<Value>(s).as_rational();
}

}  // namespace agdbg::testing
