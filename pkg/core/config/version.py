import re
from os.path import abspath, basename, dirname, isdir, isfile, join
from typing import Optional

PROJECT_ROOT = abspath(join(dirname(__file__), "..", ".."))
GIT_DIR_PATH = join(PROJECT_ROOT, ".git")
UNKNOWN_VERSION = "0.0.0"
PYPOETRY_VERSION_PATTERN = re.compile(r'^\s*version\s*=\s*"(.*)"\s*(#.*)?$')


def _read_first_line(path: str) -> Optional[str]:
    if not isfile(path):
        return None
    with open(path, "r", encoding="utf-8") as f:
        return f.readline().strip()


def get_git_commit() -> Optional[str]:
    """
    Return the current git commit (if running from a repo).

    :return: commit hash or None if not running from a git repo
    """
    if not isdir(GIT_DIR_PATH):
        return None

    ref = _read_first_line(join(GIT_DIR_PATH, "HEAD"))
    if not ref:
        return None
    if not ref.startswith("ref: "):
        return ref

    ref_path = join(GIT_DIR_PATH, ref[5:])
    commit = _read_first_line(ref_path)
    # Dangling reference (e.g. packed refs only), report the branch name
    return commit if commit else basename(ref_path)


def get_package_version() -> str:
    """
    Get package version as defined in pyproject.toml.

    :return: package version, or "0.0.0" if it can't be determined
    """
    pyproject_path = join(PROJECT_ROOT, "pyproject.toml")
    if not isfile(pyproject_path):
        return UNKNOWN_VERSION

    with open(pyproject_path, "r", encoding="utf-8") as fp:
        for line in fp:
            m = PYPOETRY_VERSION_PATTERN.match(line)
            if m:
                return m.group(1)

    return UNKNOWN_VERSION


def get_version() -> str:
    """
    Find and return the current version of Reduction Core.

    The version string is built from the package version and the current
    git commit hash (if running from a git repo). Reports embed this string,
    so identical checkouts produce identical reports.

    Example: 0.4.0-gitbf01c19

    :return: version string
    """
    version = get_package_version()
    commit = get_git_commit()
    if commit:
        version = version + "-git" + commit[:7]

    return version


__all__ = ["get_version"]
