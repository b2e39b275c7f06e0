#include <iostream>

#include "cli.hpp"
#include "obm/errors.hpp"

int main(int argc, char** argv)
{
    obm::cli::RunConfig cfg;
    try {
        if (!obm::cli::parse_args(argc, argv, cfg))
            return obm::cli::kOk;
    } catch (const obm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return obm::cli::kFailure;
    }
    return obm::cli::run(cfg, std::cout, std::cerr);
}
