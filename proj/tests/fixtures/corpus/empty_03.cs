using Xunit;

namespace Fixtures.Empty
{
    public class ActOnlyTests
    {
        [Fact]
        public void RunsWithoutChecking()
        {
            var job = new Job();
            job.Run();
        }
    }

    public class ExpressionBodiedTests
    {
        [Fact]
        public void ChecksInOneLine() => Assert.NotNull(new Job());
    }
}
