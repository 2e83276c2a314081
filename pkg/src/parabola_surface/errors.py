"""Exception hierarchy.

Every error carries a module-qualified ``code`` (e.g. ``"veech.NotHyperbolic"``)
so the CLI can report failures in a machine-readable way.
"""


class ToolkitError(Exception):
    code = "toolkit.Error"


class UsageError(ToolkitError):
    code = "cli.UsageError"
