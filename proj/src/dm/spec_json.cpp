#include "relaycap/dm/spec_json.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "relaycap/errors.hpp"

namespace relaycap::dm {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* name, const std::string& where)
{
    const auto it = obj.find(name);
    if (it == obj.end())
        throw ParseError("missing field \"" + where + name + "\"");
    return *it;
}

std::size_t read_size(const json& sizes, const char* name)
{
    const auto& v = field(sizes, name, "sizes.");
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ParseError(std::string("field \"sizes.") + name + "\" must be a positive integer");
    return v.get<std::size_t>();
}

std::vector<double> read_array(const json& doc, const char* name)
{
    const auto& v = field(doc, name, "");
    if (!v.is_array())
        throw ParseError(std::string("field \"") + name + "\" must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw ParseError(std::string("field \"") + name + "\" cell " + std::to_string(i) + " is not a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

} // namespace

DiscreteChannelSpec parse_channel_spec(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("channel spec must be a JSON object");

    const auto& sizes = field(doc, "sizes", "");
    if (!sizes.is_object())
        throw ParseError("field \"sizes\" must be an object");

    DiscreteChannelSpec spec;
    spec.sizes = {read_size(sizes, "s"), read_size(sizes, "x1"), read_size(sizes, "x2"), read_size(sizes, "y2"),
                  read_size(sizes, "y3")};
    spec.state_pmf = read_array(doc, "state_pmf");
    spec.kernel = read_array(doc, "kernel");
    spec.validate();
    return spec;
}

DiscreteChannelSpec load_channel_spec(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open channel spec " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_channel_spec(ss.str());
}

std::string to_json(const DiscreteChannelSpec& spec, int indent)
{
    const auto& a = spec.sizes;
    json doc;
    doc["sizes"] = {{"s", a.s}, {"x1", a.x1}, {"x2", a.x2}, {"y2", a.y2}, {"y3", a.y3}};
    doc["state_pmf"] = spec.state_pmf;
    doc["kernel"] = spec.kernel;
    return doc.dump(indent);
}

} // namespace relaycap::dm
