from pathlib import Path

from platformdirs import user_data_dir

# Per-user location of generated games
G_DATA_DIR = Path(user_data_dir("nbg_toolkit"))
G_GAMES_DIR = G_DATA_DIR / "games"

# Instance files shipped with the package
G_BUNDLED_DIR = Path(__file__).parent / "games"


###############################
## def initialiseDataDir ()  ##
###############################
# Create the data directory on first use rather than at import
def initialiseDataDir():
    G_GAMES_DIR.mkdir(parents=True, exist_ok=True)
    return G_GAMES_DIR


def bundledPath(name):
    """Path of a bundled instance, with or without its extension; None when absent."""
    for candidate in (G_BUNDLED_DIR / name, G_BUNDLED_DIR / f"{name}.json", G_BUNDLED_DIR / f"{name}.txt"):
        if candidate.is_file():
            return candidate
    return None


def listBundled(suffix=".json"):
    return sorted(path.stem for path in G_BUNDLED_DIR.glob(f"*{suffix}"))


def resolveInstance(reference):
    """Finds a file given as a path, a bundled name, or a name saved in the data directory."""
    path = Path(reference)
    if path.is_file():
        return path
    bundled = bundledPath(reference)
    if bundled is not None:
        return bundled
    for candidate in (G_GAMES_DIR / reference, G_GAMES_DIR / f"{reference}.json"):
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"no game or digraph file named {reference!r}")
