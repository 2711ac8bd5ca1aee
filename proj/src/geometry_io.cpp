#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "afem/mesh.hpp"

namespace fs = std::filesystem;

namespace afem {

namespace {

std::vector<std::vector<double>> readCsvRows(const fs::path& file, std::size_t columns) {
    std::ifstream in(file);
    if (!in) throw Error("missing file: " + file.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        // tolerate blank lines and surrounding whitespace
        std::string cleaned;
        for (char c : line) cleaned += (c == ',') ? ' ' : c;
        std::istringstream ls(cleaned);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (row.empty()) continue;
        if (row.size() != columns)
            throw Error("parse failure in " + file.string() + " line " + std::to_string(lineNo) +
                        ": expected " + std::to_string(columns) + " values");
        rows.push_back(std::move(row));
    }
    return rows;
}

int toIndex(double v, const fs::path& file) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v || i < 1)
        throw Error("parse failure in " + file.string() + ": expected 1-based integer index");
    return i - 1;
}

fs::path resolveGeometryDir(const std::string& nameOrPath) {
    if (fs::is_directory(nameOrPath)) return nameOrPath;
#ifdef AFEM_GEOMETRY_DIR
    const fs::path bundled = fs::path(AFEM_GEOMETRY_DIR) / nameOrPath;
    if (fs::is_directory(bundled)) return bundled;
#endif
    const fs::path local = fs::path("geometries") / nameOrPath;
    if (fs::is_directory(local)) return local;
    throw Error("geometry directory not found: " + nameOrPath);
}

} // namespace

Mesh Mesh::loadFromGeometry(const std::string& nameOrPath, MeshOptions options) {
    const fs::path dir = resolveGeometryDir(nameOrPath);

    std::vector<std::array<double, 2>> coordinates;
    for (const auto& row : readCsvRows(dir / "coordinates.dat", 2))
        coordinates.push_back({row[0], row[1]});

    std::vector<std::array<int, 3>> elements;
    {
        const fs::path file = dir / "elements.dat";
        for (const auto& row : readCsvRows(file, 3))
            elements.push_back({toIndex(row[0], file), toIndex(row[1], file), toIndex(row[2], file)});
    }

    // boundary parts must be numbered 1..m without gaps
    int maxPart = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("boundary", 0) == 0 && name.size() > 12 &&
            name.substr(name.size() - 4) == ".dat") {
            int n = 0;
            const std::string digits = name.substr(8, name.size() - 12);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
            if (ec == std::errc{} && ptr == digits.data() + digits.size())
                maxPart = std::max(maxPart, n);
        }
    }
    std::vector<std::vector<std::array<int, 2>>> boundaryEdgeLists;
    for (int p = 1; p <= maxPart; ++p) {
        const fs::path file = dir / ("boundary" + std::to_string(p) + ".dat");
        if (!fs::exists(file))
            throw Error("gap in boundary numbering: missing " + file.string());
        std::vector<std::array<int, 2>> part;
        for (const auto& row : readCsvRows(file, 2))
            part.push_back({toIndex(row[0], file), toIndex(row[1], file)});
        boundaryEdgeLists.push_back(std::move(part));
    }

    return Mesh(std::move(coordinates), std::move(elements), std::move(boundaryEdgeLists), options);
}

void Mesh::saveGeometry(const std::string& directory) const {
    const fs::path dir(directory);
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "coordinates.dat");
        out.precision(17);
        for (const auto& c : coordinates_) out << c[0] << "," << c[1] << "\n";
    }
    {
        std::ofstream out(dir / "elements.dat");
        for (const auto& e : elements_) out << e[0] + 1 << "," << e[1] + 1 << "," << e[2] + 1 << "\n";
    }
    for (std::size_t p = 0; p < boundaries_.size(); ++p) {
        std::ofstream out(dir / ("boundary" + std::to_string(p + 1) + ".dat"));
        for (int e : boundaries_[p]) out << edges_[e][0] + 1 << "," << edges_[e][1] + 1 << "\n";
    }
}

} // namespace afem
