#pragma once

namespace tattr {

/// Entry point behind the `tattr` binary. Subcommands: attribute, verify,
/// eval, gen-data, export. Returns 0 on success, 1 on runtime failure,
/// 2 on usage errors.
int cli_main(int argc, const char* const* argv);

}  // namespace tattr
