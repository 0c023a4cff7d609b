import pytest

from billiards.geometry import DomainSpec, build_domain


@pytest.fixture(scope="session")
def circle_domain():
    return build_domain(DomainSpec.circle(1.0))


@pytest.fixture(scope="session")
def circle_domain_R2():
    return build_domain(DomainSpec.circle(2.0))


@pytest.fixture(scope="session")
def ellipse_domain():
    return build_domain(DomainSpec.ellipse(1.0, 0.5))


@pytest.fixture(scope="session")
def fourier_spec():
    return DomainSpec.fourier(mean=1.0, cos={2: 0.04, 5: 0.015}, sin={3: 0.02})


@pytest.fixture(scope="session")
def fourier_domain(fourier_spec):
    return build_domain(fourier_spec)


@pytest.fixture()
def domain_file(tmp_path):
    """Factory writing a spec to a JSON file and returning its path."""

    def write(spec, name="domain.json"):
        path = tmp_path / name
        path.write_text(spec.to_json())
        return str(path)

    return write
