//! Key files written by `keygen`.
//!
//! Public halves and secret halves go to separate JSON files. Secret files
//! are created with mode `0600` on Unix.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use przk_bind_core::hash::hash_h2;
use przk_bind_core::identity::{EntityKeys, PhysicalIdentity, TwinKeyPair};
use przk_bind_core::{GroupId, PrimeGroup};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const ENTITY_PUBLIC: &str = "entity.pub.json";
pub const ENTITY_SECRET: &str = "entity.secret.json";
pub const TWIN_PUBLIC: &str = "twin.pub.json";
pub const TWIN_SECRET: &str = "twin.secret.json";

const TWIN_KEYGEN_LABEL: &[u8] = b"przk-bind/twin-keygen";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityPublic {
    pub group: GroupId,
    pub pk_p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntitySecret {
    pub group: GroupId,
    /// The provisioned identity `S_p`.
    pub s_p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwinPublic {
    pub group: GroupId,
    pub pk_d: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwinSecret {
    pub group: GroupId,
    pub sk_d: String,
}

/// Everything `keygen` produces for one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    pub entity_public: EntityPublic,
    pub entity_secret: EntitySecret,
    pub twin_public: TwinPublic,
    pub twin_secret: TwinSecret,
}

/// Derives both parties' keys from `seed`; the same seed always gives the same files.
pub fn generate(seed: &str, group: GroupId) -> Result<KeyMaterial, CliError> {
    match group {
        GroupId::Toy => generate_in::<przk_bind_core::ToyGroup>(seed),
        GroupId::Production => generate_in::<przk_bind_core::P256Group>(seed),
    }
}

fn generate_in<G: PrimeGroup>(seed: &str) -> Result<KeyMaterial, CliError> {
    let identity = PhysicalIdentity::provision(seed.as_bytes()).map_err(CliError::usage)?;
    let entity = EntityKeys::<G>::derive(&identity);
    let mut rng = ChaCha20Rng::from_seed(hash_h2(&[TWIN_KEYGEN_LABEL, seed.as_bytes()]).0);
    let twin = TwinKeyPair::<G>::generate(&mut rng);
    Ok(KeyMaterial {
        entity_public: EntityPublic {
            group: G::ID,
            pk_p: hex::encode(G::encode_element(&entity.public_key())),
        },
        entity_secret: EntitySecret {
            group: G::ID,
            s_p: hex::encode(identity.expose_secret()),
        },
        twin_public: TwinPublic {
            group: G::ID,
            pk_d: hex::encode(G::encode_element(&twin.public_key())),
        },
        twin_secret: TwinSecret {
            group: G::ID,
            sk_d: hex::encode(G::encode_scalar(&twin.secret_key())),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFile {
    pub path: PathBuf,
    pub secret: bool,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("key files always serialize");
    s.push('\n');
    s
}

/// Writes the four key files into `dir`, creating it if needed.
pub fn write_all(dir: &Path, keys: &KeyMaterial) -> Result<Vec<WrittenFile>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let files = [
        (ENTITY_PUBLIC, to_json(&keys.entity_public), false),
        (ENTITY_SECRET, to_json(&keys.entity_secret), true),
        (TWIN_PUBLIC, to_json(&keys.twin_public), false),
        (TWIN_SECRET, to_json(&keys.twin_secret), true),
    ];
    let mut written = Vec::new();
    for (name, body, secret) in files {
        let path = dir.join(name);
        if secret {
            write_secret(&path, body.as_bytes())?;
        } else {
            fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        }
        written.push(WrittenFile { path, secret });
    }
    Ok(written)
}

/// Creates or truncates `path` with owner-only permissions.
pub fn write_secret(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let mut opts = fs::OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::{OpenOptionsExt, PermissionsExt};
        opts.mode(0o600);
        let mut f = opts.open(path).map_err(|e| CliError::io(path, e))?;
        // mode() only applies on creation
        f.set_permissions(fs::Permissions::from_mode(0o600))
            .map_err(|e| CliError::io(path, e))?;
        f.write_all(contents).map_err(|e| CliError::io(path, e))
    }
    #[cfg(not(unix))]
    {
        let mut f = opts.open(path).map_err(|e| CliError::io(path, e))?;
        f.write_all(contents).map_err(|e| CliError::io(path, e))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::integrity(format!("{}: {e}", path.display())))
}

pub fn decode_element<G: PrimeGroup>(field: &str, hex_str: &str) -> Result<G::Element, String> {
    let bytes = hex::decode(hex_str).map_err(|e| format!("{field}: {e}"))?;
    G::decode_element(&bytes).map_err(|e| format!("{field}: {e}"))
}

pub fn decode_scalar<G: PrimeGroup>(field: &str, hex_str: &str) -> Result<G::Scalar, String> {
    let bytes = hex::decode(hex_str).map_err(|e| format!("{field}: {e}"))?;
    G::decode_scalar(&bytes).map_err(|e| format!("{field}: {e}"))
}

fn check_group(path: &Path, found: GroupId, want: GroupId) -> Result<(), CliError> {
    if found == want {
        Ok(())
    } else {
        Err(CliError::integrity(format!(
            "{}: group {found}, expected {want}",
            path.display()
        )))
    }
}

pub fn load_entity_keys<G: PrimeGroup>(path: &Path) -> Result<EntityKeys<G>, CliError> {
    let file: EntitySecret = read_json(path)?;
    check_group(path, file.group, G::ID)?;
    let bytes = hex::decode(&file.s_p)
        .map_err(|e| CliError::integrity(format!("{}: s_p: {e}", path.display())))?;
    let secret: [u8; 32] = bytes
        .try_into()
        .map_err(|_| CliError::integrity(format!("{}: s_p must be 32 bytes", path.display())))?;
    Ok(EntityKeys::derive(&PhysicalIdentity::from_secret(secret)))
}

pub fn load_twin_keys<G: PrimeGroup>(path: &Path) -> Result<TwinKeyPair<G>, CliError> {
    let file: TwinSecret = read_json(path)?;
    check_group(path, file.group, G::ID)?;
    let sk = decode_scalar::<G>("sk_d", &file.sk_d)
        .map_err(|e| CliError::integrity(format!("{}: {e}", path.display())))?;
    TwinKeyPair::from_secret(sk)
        .map_err(|e| CliError::integrity(format!("{}: {e}", path.display())))
}

pub fn load_entity_public<G: PrimeGroup>(path: &Path) -> Result<G::Element, CliError> {
    let file: EntityPublic = read_json(path)?;
    check_group(path, file.group, G::ID)?;
    decode_element::<G>("pk_p", &file.pk_p)
        .map_err(|e| CliError::integrity(format!("{}: {e}", path.display())))
}

pub fn load_twin_public<G: PrimeGroup>(path: &Path) -> Result<G::Element, CliError> {
    let file: TwinPublic = read_json(path)?;
    check_group(path, file.group, G::ID)?;
    decode_element::<G>("pk_d", &file.pk_d)
        .map_err(|e| CliError::integrity(format!("{}: {e}", path.display())))
}

/// Group named in a key file, read before the keys themselves.
pub fn group_of(path: &Path) -> Result<GroupId, CliError> {
    #[derive(Deserialize)]
    struct Header {
        group: GroupId,
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let header: Header = serde_json::from_str(&text)
        .map_err(|e| CliError::integrity(format!("{}: {e}", path.display())))?;
    Ok(header.group)
}
