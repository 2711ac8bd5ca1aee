#include <iostream>

#include "CLI11.hpp"
#include "afem/driver.hpp"

namespace {

struct CommonOptions {
    afem::LoopConfig config;
    std::string strategy = "nvb";
    std::string solver = "auto";
    std::string out;
};

void addCommonOptions(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--theta", opts.config.theta, "marking parameter in (0, 1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--order,-p", opts.config.order, "polynomial order")->check(CLI::Range(1, 20));
    cmd->add_option("--max-dofs", opts.config.maxDofs, "stop at this space dimension");
    cmd->add_option("--max-elements", opts.config.maxElements, "stop at this element count");
    cmd->add_option("--max-levels", opts.config.maxLevels, "level cap");
    cmd->add_option("--strategy", opts.strategy, "refinement strategy")
        ->check(CLI::IsMember({"nvb1", "nvb", "nvb3", "nvb5", "rgb", "nvbedge"}));
    cmd->add_option("--solver", opts.solver, "linear solver")
        ->check(CLI::IsMember({"auto", "cholesky", "lu", "cg"}));
    cmd->add_option("--geometry", opts.config.geometry, "initial geometry name or directory");
    cmd->add_option("--export-mesh", opts.config.exportMeshDir,
                    "write the final mesh to this directory");
    cmd->add_option("--out", opts.out, "write the convergence history as CSV");
}

int report(const afem::ConvergenceHistory& history, const std::string& out) {
    if (!history.levels.empty()) {
        const auto& last = history.levels.back();
        std::cout << "levels: " << history.levels.size() << ", final nDofs: " << last.nDofs
                  << ", final estimator: " << last.estimator << ", total time: " << last.tTotal
                  << " s\n";
    }
    if (out.empty())
        history.writeCsv(std::cout);
    else
        history.writeCsv(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive finite element experiments"};
    app.require_subcommand(1);

    CommonOptions poisson;
    poisson.config.maxElements = 1'000'000;
    auto* poissonCmd =
        app.add_subcommand("poisson", "lowest-order model problem on the unit square");
    addCommonOptions(poissonCmd, poisson);

    CommonOptions lshape;
    lshape.config.maxDofs = 100'000;
    auto* lshapeCmd =
        app.add_subcommand("lshape", "singular solution on the L-shape with known error");
    addCommonOptions(lshapeCmd, lshape);

    CommonOptions goafem;
    goafem.config.maxDofs = 100'000;
    auto* goafemCmd =
        app.add_subcommand("goafem", "goal-oriented run with discontinuous data");
    addCommonOptions(goafemCmd, goafem);

    CommonOptions ailfem;
    ailfem.config.maxDofs = 50'000;
    std::string method = "zarantonello";
    afem::AilfemConfig ailfemConfig;
    auto* ailfemCmd =
        app.add_subcommand("ailfem", "iterative linearization of a quasilinear problem");
    addCommonOptions(ailfemCmd, ailfem);
    ailfemCmd->add_option("--method", method, "linearization method")
        ->check(CLI::IsMember({"zarantonello", "kacanov", "newton"}));
    ailfemCmd->add_option("--delta", ailfemConfig.delta, "damping parameter")
        ->check(CLI::PositiveNumber);
    ailfemCmd->add_option("--inner-tol", ailfemConfig.innerTolFactor,
                          "stop inner iterations at this fraction of the estimator");
    ailfemCmd->add_option("--max-inner", ailfemConfig.maxInnerSteps, "inner iteration cap");

    std::string exportGeometry = "unitsquare", exportDir;
    int exportRefine = 0;
    std::string exportStrategy = "nvb";
    auto* exportCmd = app.add_subcommand("export-mesh", "load, refine, and write a geometry");
    exportCmd->add_option("--geometry", exportGeometry, "geometry name or directory");
    exportCmd->add_option("--refine-uniform", exportRefine, "uniform refinement rounds")
        ->check(CLI::NonNegativeNumber);
    exportCmd->add_option("--strategy", exportStrategy, "refinement strategy")
        ->check(CLI::IsMember({"nvb1", "nvb", "nvb3", "nvb5", "rgb", "nvbedge"}));
    exportCmd->add_option("--out-dir", exportDir, "target directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (poissonCmd->parsed()) {
            poisson.config.strategy = afem::strategyFromName(poisson.strategy);
            poisson.config.solver = afem::solverFromName(poisson.solver);
            return report(afem::runPoisson(poisson.config), poisson.out);
        }
        if (lshapeCmd->parsed()) {
            lshape.config.strategy = afem::strategyFromName(lshape.strategy);
            lshape.config.solver = afem::solverFromName(lshape.solver);
            return report(afem::runLshape(lshape.config), lshape.out);
        }
        if (goafemCmd->parsed()) {
            goafem.config.strategy = afem::strategyFromName(goafem.strategy);
            goafem.config.solver = afem::solverFromName(goafem.solver);
            return report(afem::runGoafem(goafem.config), goafem.out);
        }
        if (ailfemCmd->parsed()) {
            ailfem.config.strategy = afem::strategyFromName(ailfem.strategy);
            ailfem.config.solver = afem::solverFromName(ailfem.solver);
            ailfemConfig.loop = ailfem.config;
            ailfemConfig.method = afem::linearizationFromName(method);
            return report(afem::runAilfem(ailfemConfig), ailfem.out);
        }
        if (exportCmd->parsed()) {
            afem::Mesh mesh = afem::Mesh::loadFromGeometry(exportGeometry);
            if (exportRefine > 0)
                mesh.refineUniform(exportRefine, afem::strategyFromName(exportStrategy));
            mesh.saveGeometry(exportDir);
            std::cout << "wrote " << mesh.numElements() << " elements, " << mesh.numVertices()
                      << " vertices to " << exportDir << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
