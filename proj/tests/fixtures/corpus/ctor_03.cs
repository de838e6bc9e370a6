using Xunit;

namespace Fixtures.Construction
{
    public class RepositorySetupTests : TestBase
    {
        private readonly Repository _repository;
        private readonly Clock _clock;

        public RepositorySetupTests()
        {
            _clock = new Clock();
            _repository = new Repository(_clock);
        }

        [Fact]
        public void StartsEmpty()
        {
            Assert.Empty(_repository.Items);
        }
    }

    public class StaticSetupTests
    {
        private static readonly Registry Shared;

        static StaticSetupTests()
        {
            Shared = new Registry();
        }

        [Fact]
        public void SharedRegistryExists()
        {
            Assert.NotNull(Shared);
        }
    }

    public class EmptyConstructorTests
    {
        public EmptyConstructorTests()
        {
        }

        [Fact]
        public void DefaultsAreSane()
        {
            var options = new Options();
            Assert.False(options.Verbose);
        }
    }
}
